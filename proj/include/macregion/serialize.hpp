#pragma once

// Plot-ready CSV and JSON documents. Numbers are written with 17 significant
// digits (CSV) or the shortest exact representation (JSON), so every document
// re-parses to the in-memory values bit for bit. Output never depends on the
// locale.

#include <string>
#include <string_view>

#include "json.hpp"

#include "macregion/mc_validator.hpp"
#include "macregion/regions.hpp"

namespace macregion::io {

using Json = nlohmann::ordered_json;

enum class OutputFormat { json, csv };

OutputFormat parse_format(std::string_view name);

/// Shortest-safe decimal form with 17 significant digits.
std::string format_number(double v);
double parse_number(std::string_view text);

std::string frontier_csv(const Frontier<double>& f);
Frontier<double> parse_frontier_csv(std::string_view text);

Json frontier_json(const Json& manifest, std::string_view scheme, const Frontier<double>& f);
Frontier<double> parse_frontier_json(std::string_view text);

std::string region_csv(const Region<double>& r);
Json region_json(const Json& manifest, const Region<double>& r);

std::string equivalence_csv(const EquivalenceReport<double>& r);
Json equivalence_json(const Json& manifest, const EquivalenceReport<double>& r);

std::string validation_csv(const mc::SicValidationReport& r);
Json validation_json(const Json& manifest, const mc::SicValidationReport& r);

} // namespace macregion::io
