#pragma once

// Monte Carlo check of the analytic rates: simulates y = x1 + x2 + n with
// Gaussian inputs, cancels users at sample level, and estimates mutual
// information with a Gaussian plug-in estimator and a k-NN entropy estimator.
// Real samples stand for the two real dimensions of a complex channel use, so
// mutual information is reported in bits per complex use.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include <Eigen/Core>

#include "macregion/mac_core.hpp"

namespace macregion::mc {

inline constexpr std::int64_t kDefaultSamples = 1'000'000;
inline constexpr double kDefaultTolerance = 0.01;
inline constexpr int kDefaultNeighbors = 4;
inline constexpr std::int64_t kBlockSize = 1 << 16;

/// (seed, stream) select a reproducible substream; m is the sample count.
class SampleConfig {
public:
    SampleConfig(std::uint64_t seed, std::uint64_t stream, std::int64_t m);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::int64_t samples() const { return m_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::int64_t m_;
};

/// Received samples y[i] = x1[i] + x2[i] + n[i]; the noise is y - x1 - x2.
struct SampleBatch {
    Eigen::VectorXd x1;
    Eigen::VectorXd x2;
    Eigen::VectorXd y;

    Eigen::Index size() const { return y.size(); }
};

enum class User { one = 1, two = 2 };

enum class MiTarget { user1, user2_with_user1_interference, joint };

enum class MiMethod { plugin, knn };

const char* to_string(MiTarget t);
const char* to_string(MiMethod m);

struct MiEstimate {
    double value;
    double std_error;
    std::int64_t m;
    MiMethod method;
};

struct VarianceEstimate {
    double variance;
    double std_error;
};

struct EntropyEstimate {
    double bits;
    double std_error;
};

/// Draws the batch. The output depends only on (seed, stream, m): samples are
/// generated in fixed blocks with per-block engines, so `workers` only changes
/// the wall time.
SampleBatch simulate_mac(double p1, double p2, const ChannelConfig<double>& ch, const SampleConfig& cfg,
                         unsigned workers = 1);

/// Unbiased sample variance with the standard error sqrt((m4 - s^4) / m).
VarianceEstimate sample_variance(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Genie-aided cancellation: y minus the listed users' true signals.
Eigen::VectorXd sic_cancel(const SampleBatch& batch, User user);
Eigen::VectorXd sic_cancel(const SampleBatch& batch, std::initializer_list<User> users);

MiEstimate mi_plugin_gaussian(const SampleBatch& batch, MiTarget target);

/// Kozachenko-Leonenko differential entropy of 1-D samples, in bits.
EntropyEstimate entropy_knn(std::span<const double> samples, int k = kDefaultNeighbors);

/// Mutual information as a difference of two k-NN entropies.
MiEstimate mi_knn(const SampleBatch& batch, MiTarget target, int k = kDefaultNeighbors);

struct RateCheck {
    MiEstimate estimate;
    double analytic;
    double tolerance;
    bool pass;
};

struct SicValidationReport {
    RateCheck user1_after_cancel;          // I(x1; y - x2) vs log2(1 + P1/N)
    RateCheck user2_with_interference;     // I(x2; y) vs log2(1 + P2/(P1+N))
    RateCheck joint;                       // I(x1, x2; y) vs log2(1 + (P1+P2)/N)
    double chain_gap;                      // (a) + (b) - (c)
    double chain_tolerance;
    bool chain_pass;
    // Distribution-free cross-check; absent when knn_neighbors == 0.
    bool has_knn;
    MiEstimate knn_user1_after_cancel;
    MiEstimate knn_user2_with_interference;
    MiEstimate knn_joint;
    double knn_max_gap;
    bool knn_pass;
    bool passed;
    std::string scope_note;
};

SicValidationReport validate_sic_chain(double p1, double p2, const ChannelConfig<double>& ch, const SampleConfig& cfg,
                                       double tol = kDefaultTolerance, int knn_neighbors = kDefaultNeighbors,
                                       unsigned workers = 1);

} // namespace macregion::mc
