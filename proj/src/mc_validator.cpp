#include "macregion/mc_validator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

namespace macregion::mc {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

void fill_block(SampleBatch& out, double sd1, double sd2, double sdn, const SampleConfig& cfg, std::int64_t block)
{
    const auto b = static_cast<std::uint64_t>(block);
    std::seed_seq seq{lo32(cfg.seed()), hi32(cfg.seed()), lo32(cfg.stream()), hi32(cfg.stream()), lo32(b), hi32(b)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal;
    const std::int64_t begin = block * kBlockSize;
    const std::int64_t end = std::min(begin + kBlockSize, cfg.samples());
    for (std::int64_t i = begin; i < end; ++i) {
        const double x1 = sd1 * normal(engine);
        const double x2 = sd2 * normal(engine);
        const double n = sdn * normal(engine);
        out.x1[i] = x1;
        out.x2[i] = x2;
        out.y[i] = x1 + x2 + n;
    }
}

// Numerator and denominator signals of the variance/entropy ratio for a target.
std::pair<Eigen::VectorXd, Eigen::VectorXd> target_signals(const SampleBatch& batch, MiTarget target)
{
    switch (target) {
    case MiTarget::user1: return {sic_cancel(batch, User::two), sic_cancel(batch, {User::one, User::two})};
    case MiTarget::user2_with_user1_interference: return {batch.y, sic_cancel(batch, User::two)};
    case MiTarget::joint: return {batch.y, sic_cancel(batch, {User::one, User::two})};
    }
    throw DomainError("unknown mutual information target");
}

constexpr double kBitsPerNat = std::numbers::log2e;
// Rates are per complex channel use: each real sample is one of its two
// independent real dimensions.
constexpr double kRealDimsPerUse = 2.0;

} // namespace

const char* to_string(MiTarget t)
{
    switch (t) {
    case MiTarget::user1: return "user1";
    case MiTarget::user2_with_user1_interference: return "user2_with_user1_interference";
    case MiTarget::joint: return "joint";
    }
    return "?";
}

const char* to_string(MiMethod m) { return m == MiMethod::plugin ? "plugin" : "knn"; }

SampleConfig::SampleConfig(std::uint64_t seed, std::uint64_t stream, std::int64_t m)
    : seed_(seed), stream_(stream), m_(m)
{
    if (m < 2)
        throw ConfigError("sample count must be at least 2");
}

SampleBatch simulate_mac(double p1, double p2, const ChannelConfig<double>& ch, const SampleConfig& cfg,
                         unsigned workers)
{
    detail::require_power(p1, "power");
    detail::require_power(p2, "power");
    const std::int64_t m = cfg.samples();
    SampleBatch out{Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::VectorXd(m)};
    const double sd1 = std::sqrt(p1);
    const double sd2 = std::sqrt(p2);
    const double sdn = std::sqrt(ch.noise_power());
    const std::int64_t blocks = (m + kBlockSize - 1) / kBlockSize;
    const auto w = static_cast<std::int64_t>(std::clamp<unsigned>(workers, 1u, 64u));
    if (w == 1) {
        for (std::int64_t b = 0; b < blocks; ++b)
            fill_block(out, sd1, sd2, sdn, cfg, b);
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::int64_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::int64_t b = t; b < blocks; b += w)
                fill_block(out, sd1, sd2, sdn, cfg, b);
        });
    }
    pool.clear();
    return out;
}

VarianceEstimate sample_variance(const Eigen::Ref<const Eigen::VectorXd>& v)
{
    const auto m = static_cast<double>(v.size());
    if (v.size() < 2)
        throw EstimationError("variance needs at least 2 samples");
    const Eigen::ArrayXd dev = v.array() - v.mean();
    const Eigen::ArrayXd sq = dev.square();
    const double var = sq.sum() / (m - 1.0);
    const double m2 = sq.mean();
    const double m4 = sq.square().mean();
    return {var, std::sqrt(std::max(m4 - m2 * m2, 0.0) / m)};
}

Eigen::VectorXd sic_cancel(const SampleBatch& batch, User user)
{
    return batch.y - (user == User::one ? batch.x1 : batch.x2);
}

Eigen::VectorXd sic_cancel(const SampleBatch& batch, std::initializer_list<User> users)
{
    Eigen::VectorXd residual = batch.y;
    for (User u : users)
        residual -= (u == User::one ? batch.x1 : batch.x2);
    return residual;
}

MiEstimate mi_plugin_gaussian(const SampleBatch& batch, MiTarget target)
{
    const Eigen::Index m = batch.size();
    if (m < 100)
        throw EstimationError("plug-in estimator needs at least 100 samples");
    const auto [num, den] = target_signals(batch, target);
    const Eigen::ArrayXd dn = num.array() - num.mean();
    const Eigen::ArrayXd dd = den.array() - den.mean();
    const double var_num = dn.square().sum() / static_cast<double>(m - 1);
    const double var_den = dd.square().sum() / static_cast<double>(m - 1);
    if (!(var_num > 0.0) || !(var_den > 0.0))
        throw EstimationError("degenerate variance in plug-in estimator");
    const double value = 0.5 * kRealDimsPerUse * std::log2(var_num / var_den);
    // Delta method on log(var_num) - log(var_den), keeping their covariance.
    const Eigen::ArrayXd u = dn.square() / var_num - dd.square() / var_den;
    const double u_var = (u - u.mean()).square().sum() / static_cast<double>(m - 1);
    const double se = 0.5 * kRealDimsPerUse * kBitsPerNat * std::sqrt(u_var / static_cast<double>(m));
    return {value, se, m, MiMethod::plugin};
}

EntropyEstimate entropy_knn(std::span<const double> samples, int k)
{
    if (k < 1)
        throw EstimationError("neighbor count must be at least 1");
    const auto m = static_cast<std::int64_t>(samples.size());
    if (m < k + 1)
        throw EstimationError("insufficient samples for k-NN entropy");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    Eigen::ArrayXd log_dist(m);
    for (std::int64_t i = 0; i < m; ++i) {
        std::int64_t left = i - 1;
        std::int64_t right = i + 1;
        double dist = 0.0;
        for (int step = 0; step < k; ++step) {
            const double dl = left >= 0 ? s[i] - s[left] : HUGE_VAL;
            const double dr = right < m ? s[right] - s[i] : HUGE_VAL;
            if (dl <= dr) {
                dist = dl;
                --left;
            } else {
                dist = dr;
                ++right;
            }
        }
        if (!(dist > 0.0))
            throw EstimationError("degenerate samples: zero k-NN distance");
        log_dist[i] = std::log(dist);
    }
    const double mean_log = log_dist.mean();
    const double nats = boost::math::digamma(static_cast<double>(m)) - boost::math::digamma(static_cast<double>(k)) +
                        std::numbers::ln2 + mean_log;
    const double sd = std::sqrt((log_dist - mean_log).square().sum() / static_cast<double>(m - 1));
    return {nats * kBitsPerNat, kBitsPerNat * sd / std::sqrt(static_cast<double>(m))};
}

MiEstimate mi_knn(const SampleBatch& batch, MiTarget target, int k)
{
    const auto [num, den] = target_signals(batch, target);
    if (num == den)
        return {0.0, 0.0, batch.size(), MiMethod::knn};
    const auto h_num = entropy_knn({num.data(), static_cast<std::size_t>(num.size())}, k);
    const auto h_den = entropy_knn({den.data(), static_cast<std::size_t>(den.size())}, k);
    return {kRealDimsPerUse * (h_num.bits - h_den.bits), kRealDimsPerUse * std::hypot(h_num.std_error, h_den.std_error),
            batch.size(), MiMethod::knn};
}

SicValidationReport validate_sic_chain(double p1, double p2, const ChannelConfig<double>& ch, const SampleConfig& cfg,
                                       double tol, int knn_neighbors, unsigned workers)
{
    if (!(tol >= 0.0))
        throw DomainError("tolerance must be nonnegative");
    const SampleBatch batch = simulate_mac(p1, p2, ch, cfg, workers);
    const auto check = [tol](MiEstimate est, double analytic) {
        const double t = std::max(tol, 3.0 * est.std_error);
        return RateCheck{est, analytic, t, std::abs(est.value - analytic) <= t};
    };
    SicValidationReport r{};
    r.user1_after_cancel = check(mi_plugin_gaussian(batch, MiTarget::user1), shannon_rate<double>(p1, ch));
    r.user2_with_interference =
        check(mi_plugin_gaussian(batch, MiTarget::user2_with_user1_interference), sic_rate<double>(p2, p1, ch));
    r.joint = check(mi_plugin_gaussian(batch, MiTarget::joint), sum_capacity<double>(PerUser<double>(p1, p2), ch));

    const auto& a = r.user1_after_cancel.estimate;
    const auto& b = r.user2_with_interference.estimate;
    const auto& c = r.joint.estimate;
    r.chain_gap = a.value + b.value - c.value;
    const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error + c.std_error * c.std_error);
    r.chain_tolerance = std::max(3.0 * combined, 1e-12);
    r.chain_pass = std::abs(r.chain_gap) <= r.chain_tolerance;

    r.has_knn = knn_neighbors > 0;
    r.knn_pass = true;
    r.knn_max_gap = 0.0;
    if (r.has_knn) {
        r.knn_user1_after_cancel = mi_knn(batch, MiTarget::user1, knn_neighbors);
        r.knn_user2_with_interference = mi_knn(batch, MiTarget::user2_with_user1_interference, knn_neighbors);
        r.knn_joint = mi_knn(batch, MiTarget::joint, knn_neighbors);
        const std::pair<const MiEstimate*, const MiEstimate*> pairs[] = {
            {&a, &r.knn_user1_after_cancel}, {&b, &r.knn_user2_with_interference}, {&c, &r.knn_joint}};
        for (const auto& [plug, knn] : pairs) {
            const double gap = std::abs(plug->value - knn->value);
            r.knn_max_gap = std::max(r.knn_max_gap, gap);
            if (gap > std::max(0.02, 3.0 * std::hypot(plug->std_error, knn->std_error)))
                r.knn_pass = false;
        }
    }
    r.passed = r.user1_after_cancel.pass && r.user2_with_interference.pass && r.joint.pass && r.chain_pass &&
               r.knn_pass;
    r.scope_note = "genie-aided cancellation; checks rate identities, not decodability at these rates";
    return r;
}

} // namespace macregion::mc
