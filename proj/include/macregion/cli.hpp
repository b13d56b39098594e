#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace macregion::cli {

inline constexpr const char* kToolName = "macregion";
inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

/// Runs one command line (without the program name). Documents go to `out`,
/// diagnostics and stdout-CSV manifests to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace macregion::cli
