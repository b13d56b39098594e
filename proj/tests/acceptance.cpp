// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "macregion/cli.hpp"
#include "macregion/mc_validator.hpp"
#include "macregion/regions.hpp"
#include "macregion/serialize.hpp"
#include "oracles.hpp"

using namespace macregion;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1. shannon_rate(P1) + sic_rate(P2, P1) equals the sum capacity.
Outcome chain_rule_identity()
{
    const auto t0 = Clock::now();
    oracle::LogUniform draw(1001, 1e-3, 1e3);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p1 = draw(), p2 = draw();
        const ChannelConfig<double> ch(draw());
        const double csum = sum_capacity<double>(PerUser<double>(p1, p2), ch);
        worst = std::max(worst, std::abs(shannon_rate(p1, ch) + sic_rate(p2, p1, ch) - csum) / csum);
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 1.0, fmt("max rel err %.3g (<= 1e-9), %.3f s (< 1 s)", worst, secs)};
}

// 2. FD touch point meets the sum capacity; every other grid split stays below it.
Outcome fd_touch_point()
{
    oracle::LogUniform draw(2002, 1e-3, 1e3);
    const auto grid = detail::alpha_grid<double>(1025);
    double worst_touch = 0.0, worst_excess = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const PerUser<double> b(draw(), draw());
        const ChannelConfig<double> ch(draw());
        const double csum = sum_capacity<double>(b, ch);
        worst_touch = std::max(worst_touch, std::abs(fd_rate_pair(fd_touch_split(b), b, ch).sum() - csum) / csum);
        for (double a : grid)
            worst_excess = std::max(worst_excess, fd_rate_pair(ResourceSplit<double>(a), b, ch).sum() - csum);
    }
    return {worst_touch <= 1e-9 && worst_excess <= 1e-9,
            fmt("touch rel err %.3g (<= 1e-9), max grid excess %.3g (<= 1e-9)", worst_touch, worst_excess)};
}

// 3. TD and FD frontiers lie in the pentagon; FD dominates TD at interior grid splits.
Outcome orthogonal_inside_pentagon()
{
    oracle::LogUniform draw(3003, 1e-3, 1e3);
    int outside = 0, not_dominating = 0, checked = 0;
    const auto grid = detail::alpha_grid<double>(kDefaultResolution);
    for (int i = 0; i < 100; ++i) {
        const PerUser<double> b(draw(), draw());
        const ChannelConfig<double> ch(draw());
        const auto region = superposition_region<double>(b, ch);
        for (const auto& f : {td_frontier<double>(b, ch), fd_frontier<double>(b, ch)}) {
            for (Eigen::Index j = 0; j < f.size(); ++j, ++checked)
                outside += region_contains(region, f[j], 1e-9) ? 0 : 1;
        }
        for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
            const ResourceSplit<double> s(grid[j]);
            not_dominating += dominates(fd_rate_pair(s, b, ch), td_rate_pair(s, b, ch)) ? 0 : 1;
        }
    }
    return {outside == 0 && not_dominating == 0,
            fmt("%.0f frontier points, %.0f outside, %.0f interior splits where FD fails to dominate", checked, outside,
                not_dominating)};
}

// 4. Sum-power equivalence of SC, TD and FD.
Outcome sum_power_equivalence()
{
    const auto t0 = Clock::now();
    oracle::LogUniform draw(4004, 1e-3, 1e3);
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = draw();
        const auto r = verify_equivalence<double>(p, ChannelConfig<double>(draw()), 4097, 1e-6);
        worst = std::max({worst, r.sc_td, r.sc_fd, r.td_fd});
        failures += r.verdict ? 0 : 1;
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && worst <= 1e-9 && secs < 5.0,
            fmt("%.0f false verdicts, max Hausdorff %.3g (<= 1e-9), %.3f s (< 5 s)", failures, worst, secs)};
}

// 5. Monte Carlo reproduction of the SIC rate and the sum rate.
Outcome monte_carlo_sic_rate()
{
    const auto t0 = Clock::now();
    const double cases[][2] = {{1, 1}, {10, 0.1}, {0.1, 10}};
    const ChannelConfig<double> ch(1.0);
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto batch = mc::simulate_mac(c[0], c[1], ch, mc::SampleConfig(20261018, 0, 1'000'000));
        const auto user2 = mc::mi_plugin_gaussian(batch, mc::MiTarget::user2_with_user1_interference);
        const auto joint = mc::mi_plugin_gaussian(batch, mc::MiTarget::joint);
        const double e2 = std::abs(user2.value - sic_rate(c[1], c[0], ch));
        const double ej = std::abs(joint.value - shannon_rate(c[0] + c[1], ch));
        ok = ok && e2 <= std::max(0.01, 3 * user2.std_error) && ej <= std::max(0.01, 3 * joint.std_error);
        detail += fmt("(%g,%g,1): ", c[0], c[1]) + fmt("|dR2| %.2e |dRsum| %.2e; ", e2, ej);
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 10.0, detail + fmt("%.2f s (< 10 s)", secs)};
}

// 6. Sample-level cancellation leaves the expected residual power.
Outcome sic_cancellation()
{
    const ChannelConfig<double> ch(1.0);
    const double cases[][2] = {{1, 1}, {10, 0.1}, {0.1, 10}};
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto batch = mc::simulate_mac(c[0], c[1], ch, mc::SampleConfig(6006, 1, 1'000'000));
        const auto after2 = mc::sample_variance(mc::sic_cancel(batch, mc::User::two));
        const auto after_both = mc::sample_variance(mc::sic_cancel(batch, {mc::User::two, mc::User::one}));
        const double z2 = std::abs(after2.variance - (c[0] + 1.0)) / after2.std_error;
        const double zb = std::abs(after_both.variance - 1.0) / after_both.std_error;
        worst = std::max({worst, z2, zb});
        ok = ok && z2 <= 5.0 && zb <= 5.0;
    }
    return {ok, fmt("max deviation %.2f SE (<= 5)", worst)};
}

// 7. Half-space classification agrees with an independent vertex-list test.
Outcome geometry_oracle()
{
    const auto region = superposition_region<double>(PerUser<double>(1, 3), ChannelConfig<double>(1.0));
    std::vector<oracle::Pt> verts;
    for (Eigen::Index i = 0; i < region.vertices().rows(); ++i)
        verts.push_back({region.vertices()(i, 0), region.vertices()(i, 1)});
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> ux(-0.2, 1.2 * region.vertices().col(0).maxCoeff());
    std::uniform_real_distribution<double> uy(-0.2, 1.2 * region.vertices().col(1).maxCoeff());
    int disagreements = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const double x = ux(rng), y = uy(rng);
        const bool by_halfspaces = (region.normals() * Point2<double>(x, y) - region.bounds()).maxCoeff() <= 1e-9;
        disagreements += by_halfspaces == oracle::inside_convex_polygon(verts, {x, y}, 1e-9) ? 0 : 1;
    }
    return {disagreements == 0, fmt("%.0f of %.0f points disagree", disagreements, n)};
}

// 8. Polymatroid constraints reduce to the pentagon; three-user grand coalition bound.
Outcome polymatroid_consistency()
{
    const ChannelConfig<double> ch(1.0);
    const double two[] = {1.0, 1.0};
    const auto k2 = polymatroid_region<double>(two, ch);
    const auto pent = superposition_region<double>(PerUser<double>(1, 1), ch);
    double worst = 0.0;
    for (Eigen::Index r = 0; r < 3; ++r) {
        worst = std::max(worst, (k2.membership.row(r) - pent.normals().row(r + 2)).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(k2.bounds(r) - pent.bounds()(r + 2)));
    }
    const double three[] = {1.0, 1.0, 1.0};
    const auto k3 = polymatroid_region<double>(three, ch);
    const double grand = std::abs(k3.bounds(6) - 2.0);
    return {worst <= 1e-12 && grand <= 1e-12 && k3.bounds.size() == 7,
            fmt("K=2 max mismatch %.3g, K=3 grand-coalition error %.3g (<= 1e-12)", worst, grand)};
}

// 9. Exact frontier round-trip through the CLI; identical seeds give identical reports.
Outcome cli_round_trip()
{
    const auto run = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::make_pair(code, out.str());
    };
    bool exact = true;
    int documents = 0;
    for (const char* scheme : {"sc", "td", "fd"}) {
        for (const char* format : {"csv", "json"}) {
            const auto [code, text] = run({"frontier", "--scheme", scheme, "--p1", "0.7", "--p2", "3.3", "--noise", "1.3",
                                           "--resolution", "1025", "--format", format});
            const PowerBudget<double> b = PerUser<double>(0.7, 3.3);
            const ChannelConfig<double> ch(1.3);
            const auto mem = std::string(scheme) == "sc"   ? superposition_frontier<double>(b, ch)
                             : std::string(scheme) == "td" ? td_frontier<double>(b, ch)
                                                           : fd_frontier<double>(b, ch);
            const auto parsed =
                std::string(format) == "csv" ? io::parse_frontier_csv(text) : io::parse_frontier_json(text);
            exact = exact && code == 0 && parsed.points() == mem.points();
            ++documents;
        }
    }
    const std::vector<std::string> validate = {"validate", "--p1", "1", "--p2", "1", "--noise", "1",
                                               "--samples", "1000000", "--seed", "42", "--no-timestamp"};
    const auto first = run(validate);
    const auto second = run(validate);
    const bool identical = first.first == 0 && first.second == second.second;
    return {exact && identical, std::to_string(documents) + " frontier documents re-parse bit-exact: " +
                                    (exact ? "yes" : "no") + "; validate reports byte-identical: " +
                                    (identical ? "yes" : "no")};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 chain-rule identity", chain_rule_identity},
        {"AC2 FD touch point", fd_touch_point},
        {"AC3 orthogonal frontiers inside pentagon", orthogonal_inside_pentagon},
        {"AC4 sum-power equivalence", sum_power_equivalence},
        {"AC5 Monte Carlo SIC rate", monte_carlo_sic_rate},
        {"AC6 SIC cancellation residuals", sic_cancellation},
        {"AC7 geometry oracle", geometry_oracle},
        {"AC8 polymatroid consistency", polymatroid_consistency},
        {"AC9 CLI round-trip and reproducibility", cli_round_trip},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o{false, ""};
        try {
            o = check();
        } catch (const std::exception& e) {
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
