#pragma once

// Rate regions as explicit convex geometry, sampled Pareto frontiers, and the
// sum-power equivalence check between superposition coding, TD and FD.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "macregion/errors.hpp"
#include "macregion/mac_core.hpp"
#include "macregion/types.hpp"

namespace macregion {

inline constexpr int kDefaultResolution = 1025;
inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kVertexMergeTolerance = 1e-12;
inline constexpr double kVertexFeasibilityTolerance = 1e-9;
inline constexpr int kMaxPolymatroidUsers = 16;

/// a1 * r1 + a2 * r2 <= b
template <std::floating_point Scalar = double>
struct HalfSpace {
    Scalar a1;
    Scalar a2;
    Scalar b;
};

/// Convex polygon given both as an intersection of half-spaces and as its
/// counterclockwise vertex list.
template <std::floating_point Scalar = double>
class Region {
public:
    Region(PointList<Scalar> normals, Vector<Scalar> bounds, PointList<Scalar> vertices)
        : normals_(std::move(normals)), bounds_(std::move(bounds)), vertices_(std::move(vertices))
    {
        if (normals_.rows() != bounds_.size() || normals_.rows() == 0)
            throw DomainError("region needs one bound per half-space normal");
        if (!normals_.allFinite() || !bounds_.allFinite() || !vertices_.allFinite())
            throw DomainError("region coefficients must be finite");
        if ((normals_.rowwise().squaredNorm().array() == Scalar(0)).any())
            throw DomainError("half-space normal must be nonzero");
        if ((bounds_.array() < Scalar(0)).any())
            throw DomainError("region must contain the origin");
        if (vertices_.rows() == 0)
            throw DomainError("region needs at least one vertex");
        const Matrix<Scalar> slack = (normals_ * vertices_.transpose()).colwise() - bounds_;
        if (slack.maxCoeff() > Scalar(kVertexFeasibilityTolerance))
            throw DomainError("region vertex violates a half-space");
        const Eigen::Index n = vertices_.rows();
        for (Eigen::Index i = 0; n > 2 && i < n; ++i) {
            const Point2<Scalar> e0 = vertices_.row((i + 1) % n) - vertices_.row(i);
            const Point2<Scalar> e1 = vertices_.row((i + 2) % n) - vertices_.row((i + 1) % n);
            if (e0.x() * e1.y() - e0.y() * e1.x() < -Scalar(kVertexMergeTolerance))
                throw DomainError("region vertices must be convex and counterclockwise");
        }
    }

    Eigen::Index halfspace_count() const { return normals_.rows(); }
    HalfSpace<Scalar> halfspace(Eigen::Index i) const { return {normals_(i, 0), normals_(i, 1), bounds_(i)}; }

    const PointList<Scalar>& normals() const { return normals_; }
    const Vector<Scalar>& bounds() const { return bounds_; }
    const PointList<Scalar>& vertices() const { return vertices_; }

private:
    PointList<Scalar> normals_;
    Vector<Scalar> bounds_;
    PointList<Scalar> vertices_;
};

/// Sampled Pareto boundary. Points are ordered by r1 ascending with r2
/// nonincreasing; a vertical run (equal r1) is ordered by r2 descending.
template <std::floating_point Scalar = double>
class Frontier {
public:
    explicit Frontier(PointList<Scalar> points) : points_(std::move(points))
    {
        if (points_.rows() < 2)
            throw DegenerateFrontier();
        if (!points_.allFinite() || (points_.array() < Scalar(0)).any())
            throw DomainError("frontier points must be finite and nonnegative");
        for (Eigen::Index i = 1; i < points_.rows(); ++i) {
            const bool ordered = points_(i, 0) >= points_(i - 1, 0) && points_(i, 1) <= points_(i - 1, 1);
            const bool distinct = points_(i, 0) != points_(i - 1, 0) || points_(i, 1) != points_(i - 1, 1);
            if (!ordered || !distinct)
                throw DomainError("frontier points must be distinct and Pareto ordered");
        }
    }

    Eigen::Index size() const { return points_.rows(); }
    RatePair<Scalar> operator[](Eigen::Index i) const { return {points_(i, 0), points_(i, 1)}; }
    const PointList<Scalar>& points() const { return points_; }

private:
    PointList<Scalar> points_;
};

namespace detail {

template <std::floating_point Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

// Drops repeated vertices, then vertices lying inside a straight edge, of a
// closed polygon. A polygon that folds back on itself (a segment) keeps both ends.
template <std::floating_point Scalar>
PointList<Scalar> merge_vertices(const std::vector<Point2<Scalar>>& v)
{
    const Scalar tol(kVertexMergeTolerance);
    const auto same = [tol](const Point2<Scalar>& a, const Point2<Scalar>& b) {
        return (a - b).template lpNorm<Eigen::Infinity>() <= tol;
    };
    std::vector<Point2<Scalar>> out;
    for (const auto& p : v)
        if (out.empty() || !same(p, out.back()))
            out.push_back(p);
    while (out.size() > 1 && same(out.front(), out.back()))
        out.pop_back();
    bool changed = true;
    while (changed && out.size() > 2) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Point2<Scalar> in = out[i] - out[(i + out.size() - 1) % out.size()];
            const Point2<Scalar> on = out[(i + 1) % out.size()] - out[i];
            if (std::abs(cross<Scalar>(in, on)) <= tol && in.dot(on) > Scalar(0)) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    PointList<Scalar> m(static_cast<Eigen::Index>(out.size()), 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = out[i].transpose();
    return m;
}

template <std::floating_point Scalar>
Frontier<Scalar> make_frontier(std::vector<Point2<Scalar>> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point2<Scalar>& a, const Point2<Scalar>& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() > b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    PointList<Scalar> out(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    return Frontier<Scalar>(std::move(out));
}

template <std::floating_point Scalar>
std::vector<Scalar> alpha_grid(int resolution)
{
    if (resolution < 2)
        throw ConfigError("frontier resolution must be at least 2");
    std::vector<Scalar> grid(static_cast<std::size_t>(resolution));
    for (int j = 0; j < resolution; ++j)
        grid[static_cast<std::size_t>(j)] = static_cast<Scalar>(j) / static_cast<Scalar>(resolution - 1);
    return grid;
}

// Per-user budgets with a silent user collapse to a segment; returns its two
// endpoints, or nothing when the budget is not degenerate.
template <std::floating_point Scalar>
std::vector<Point2<Scalar>> degenerate_segment(const PowerBudget<Scalar>& budget, const ChannelConfig<Scalar>& ch)
{
    const Scalar total = std::visit([](const auto& b) { return b.total(); }, budget);
    if (total == Scalar(0))
        throw DegenerateFrontier();
    const auto* b = std::get_if<PerUser<Scalar>>(&budget);
    if (b == nullptr)
        return {};
    if (b->p2() == Scalar(0))
        return {Point2<Scalar>(0, 0), Point2<Scalar>(shannon_rate<Scalar>(b->p1(), ch), 0)};
    if (b->p1() == Scalar(0))
        return {Point2<Scalar>(0, shannon_rate<Scalar>(b->p2(), ch)), Point2<Scalar>(0, 0)};
    return {};
}

template <std::floating_point Scalar, class PairAt>
Frontier<Scalar> sweep(const std::vector<Scalar>& alphas, PairAt pair_at)
{
    std::vector<Point2<Scalar>> pts;
    pts.reserve(alphas.size());
    for (Scalar a : alphas)
        pts.push_back(pair_at(ResourceSplit<Scalar>(a)).vector());
    return make_frontier(std::move(pts));
}

// max over p in `from` of the distance to the nearest point of `to`; `to` is r1-sorted.
template <std::floating_point Scalar>
Scalar directed_hausdorff(const PointList<Scalar>& from, const PointList<Scalar>& to)
{
    const Eigen::Index n = to.rows();
    Scalar worst(0);
    for (Eigen::Index i = 0; i < from.rows(); ++i) {
        const Scalar x = from(i, 0);
        const Scalar y = from(i, 1);
        Eigen::Index lo = 0, hi = n;
        while (lo < hi) {
            const Eigen::Index mid = lo + (hi - lo) / 2;
            if (to(mid, 0) < x)
                lo = mid + 1;
            else
                hi = mid;
        }
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index j = lo; j < n; ++j) {
            const Scalar dx = to(j, 0) - x;
            if (dx * dx >= best)
                break;
            best = std::min(best, dx * dx + (to(j, 1) - y) * (to(j, 1) - y));
        }
        for (Eigen::Index j = lo - 1; j >= 0; --j) {
            const Scalar dx = x - to(j, 0);
            if (dx * dx >= best)
                break;
            best = std::min(best, dx * dx + (to(j, 1) - y) * (to(j, 1) - y));
        }
        worst = std::max(worst, best);
        if (best == std::numeric_limits<Scalar>::infinity())
            return best;
    }
    return std::sqrt(worst);
}

} // namespace detail

/// Superposition-coding capacity region: the pentagon for per-user budgets, the
/// triangle r1 + r2 <= C for a shared budget.
template <std::floating_point Scalar>
Region<Scalar> superposition_region(const std::type_identity_t<PowerBudget<Scalar>>& budget,
                                    const ChannelConfig<Scalar>& ch)
{
    const Scalar csum = sum_capacity<Scalar>(budget, ch);
    std::vector<Point2<Scalar>> vertices;
    PointList<Scalar> normals;
    Vector<Scalar> bounds;
    if (const auto* b = std::get_if<PerUser<Scalar>>(&budget)) {
        const auto [upper, lower] = corner_points(*b, ch);
        const Scalar c1 = upper.r1();
        const Scalar c2 = lower.r2();
        normals.resize(5, 2);
        normals << -1, 0, 0, -1, 1, 0, 0, 1, 1, 1;
        bounds.resize(5);
        bounds << 0, 0, c1, c2, csum;
        vertices = {Point2<Scalar>(0, 0), Point2<Scalar>(c1, 0), upper.vector(), lower.vector(),
                    Point2<Scalar>(0, c2)};
    } else {
        normals.resize(3, 2);
        normals << -1, 0, 0, -1, 1, 1;
        bounds.resize(3);
        bounds << 0, 0, csum;
        vertices = {Point2<Scalar>(0, 0), Point2<Scalar>(csum, 0), Point2<Scalar>(0, csum)};
    }
    return Region<Scalar>(std::move(normals), std::move(bounds), detail::merge_vertices(vertices));
}

template <std::floating_point Scalar>
Frontier<Scalar> td_frontier(const std::type_identity_t<PowerBudget<Scalar>>& budget, const ChannelConfig<Scalar>& ch,
                             int resolution = kDefaultResolution)
{
    const auto alphas = detail::alpha_grid<Scalar>(resolution);
    if (auto seg = detail::degenerate_segment(budget, ch); !seg.empty())
        return detail::make_frontier(std::move(seg));
    return detail::sweep(alphas, [&](const ResourceSplit<Scalar>& s) { return td_rate_pair(s, budget, ch); });
}

/// FD boundary; per-user budgets always include the touch split p1 / (p1 + p2).
template <std::floating_point Scalar>
Frontier<Scalar> fd_frontier(const std::type_identity_t<PowerBudget<Scalar>>& budget, const ChannelConfig<Scalar>& ch,
                             int resolution = kDefaultResolution)
{
    auto alphas = detail::alpha_grid<Scalar>(resolution);
    if (auto seg = detail::degenerate_segment(budget, ch); !seg.empty())
        return detail::make_frontier(std::move(seg));
    if (const auto* b = std::get_if<PerUser<Scalar>>(&budget))
        alphas.push_back(fd_touch_split(*b).alpha());
    return detail::sweep(alphas, [&](const ResourceSplit<Scalar>& s) { return fd_rate_pair(s, budget, ch); });
}

/// How the power fraction is gridded when sweeping the sum-power superposition line.
enum class PowerSweep {
    uniform_power, ///< alpha_j = j / (n - 1)
    rate_matched,  ///< alpha_j chosen so that r1 = j / (n - 1) * C, the TD/FD sample positions
};

/// Power fractions of the superposition sweep.
template <std::floating_point Scalar>
std::vector<Scalar> superposition_power_grid(Scalar p_total, const ChannelConfig<Scalar>& ch, int resolution,
                                             PowerSweep sweep)
{
    auto grid = detail::alpha_grid<Scalar>(resolution);
    if (sweep == PowerSweep::uniform_power || p_total == Scalar(0))
        return grid;
    // r1 = log2(1 + a P / N) = t C  <=>  a = N (2^(t C) - 1) / P
    const Scalar c = shannon_rate<Scalar>(p_total, ch);
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
        const Scalar a = ch.noise_power() * std::expm1(grid[j] * c * std::numbers::ln2_v<Scalar>) / p_total;
        grid[j] = std::clamp(a, Scalar(0), Scalar(1));
    }
    return grid;
}

/// Superposition boundary. Per-user budgets give the three dominant pentagon
/// edges sampled by arc length, always including both SIC corners; shared
/// budgets sweep the power split with user 2 decoded first.
template <std::floating_point Scalar>
Frontier<Scalar> superposition_frontier(const std::type_identity_t<PowerBudget<Scalar>>& budget,
                                        const ChannelConfig<Scalar>& ch, int resolution = kDefaultResolution,
                                        PowerSweep sweep = PowerSweep::uniform_power)
{
    const auto alphas = detail::alpha_grid<Scalar>(resolution);
    if (auto seg = detail::degenerate_segment(budget, ch); !seg.empty())
        return detail::make_frontier(std::move(seg));
    if (const auto* s = std::get_if<SumPower<Scalar>>(&budget)) {
        const auto grid = superposition_power_grid(s->total(), ch, resolution, sweep);
        return detail::sweep(grid, [&](const ResourceSplit<Scalar>& a) {
            return sum_power_rate_pair(Scheme::superposition, a, s->total(), ch);
        });
    }
    const auto [upper, lower] = corner_points(std::get<PerUser<Scalar>>(budget), ch);
    const std::vector<Point2<Scalar>> poly = {Point2<Scalar>(0, lower.r2()), lower.vector(), upper.vector(),
                                              Point2<Scalar>(upper.r1(), 0)};
    std::vector<Scalar> cumulative = {Scalar(0)};
    for (std::size_t i = 1; i < poly.size(); ++i)
        cumulative.push_back(cumulative.back() + (poly[i] - poly[i - 1]).norm());
    std::vector<Point2<Scalar>> pts = poly;
    for (Scalar a : alphas) {
        const Scalar s = a * cumulative.back();
        std::size_t e = 1;
        while (e + 1 < poly.size() && cumulative[e] < s)
            ++e;
        const Scalar len = cumulative[e] - cumulative[e - 1];
        const Scalar t = len > Scalar(0) ? std::clamp((s - cumulative[e - 1]) / len, Scalar(0), Scalar(1)) : Scalar(0);
        Point2<Scalar> p = poly[e - 1] + t * (poly[e] - poly[e - 1]);
        // Keep the horizontal and vertical edges exact.
        if (e == 1)
            p.y() = poly[0].y();
        if (e == 2)
            p = p.cwiseMax(Point2<Scalar>(poly[1].x(), poly[2].y())).cwiseMin(Point2<Scalar>(poly[2].x(), poly[1].y()));
        if (e == 3)
            p.x() = poly[3].x();
        pts.push_back(p.cwiseMax(Scalar(0)));
    }
    return detail::make_frontier(std::move(pts));
}

template <std::floating_point Scalar>
bool region_contains(const Region<Scalar>& region, const RatePair<Scalar>& point, std::type_identity_t<Scalar> tol)
{
    const Vector<Scalar> slack = region.normals() * point.vector() - region.bounds();
    return slack.maxCoeff() <= tol;
}

/// Componentwise p >= q.
template <std::floating_point Scalar>
bool dominates(const RatePair<Scalar>& p, const RatePair<Scalar>& q)
{
    return p.r1() >= q.r1() && p.r2() >= q.r2();
}

/// Symmetric Hausdorff distance between the sampled point sets (no interpolation).
template <std::floating_point Scalar>
Scalar hausdorff(const Frontier<Scalar>& f, const Frontier<Scalar>& g)
{
    if (f.size() == 0 || g.size() == 0)
        throw DomainError("hausdorff distance of an empty frontier");
    return std::max(detail::directed_hausdorff(f.points(), g.points()),
                    detail::directed_hausdorff(g.points(), f.points()));
}

template <std::floating_point Scalar = double>
struct EquivalenceReport {
    Scalar sum_capacity;
    Scalar sc_td;
    Scalar sc_fd;
    Scalar td_fd;
    Scalar tolerance;
    bool verdict;
};

/// Compares the superposition, TD and FD regions under a shared budget.
///
/// The superposition line is swept on the rate-matched power grid so that its
/// samples sit at the same rate positions as the TD and FD samples; every
/// distance then measures whether a power split realises each orthogonal point.
template <std::floating_point Scalar>
EquivalenceReport<Scalar> verify_equivalence(std::type_identity_t<Scalar> p_total, const ChannelConfig<Scalar>& ch,
                                             int resolution = kDefaultResolution,
                                             std::type_identity_t<Scalar> tol = Scalar(kDefaultTolerance))
{
    if (!std::isfinite(p_total) || !(p_total > Scalar(0)))
        throw DomainError("sum power must be positive");
    if (!(tol >= Scalar(0)))
        throw DomainError("tolerance must be nonnegative");
    const PowerBudget<Scalar> budget = SumPower<Scalar>(p_total);
    const auto sc = superposition_frontier<Scalar>(budget, ch, resolution, PowerSweep::rate_matched);
    const auto td = td_frontier<Scalar>(budget, ch, resolution);
    const auto fd = fd_frontier<Scalar>(budget, ch, resolution);
    EquivalenceReport<Scalar> report{sum_capacity<Scalar>(budget, ch), hausdorff(sc, td), hausdorff(sc, fd),
                                     hausdorff(td, fd), tol, false};
    report.verdict = report.sc_td <= tol && report.sc_fd <= tol && report.td_fd <= tol;
    return report;
}

/// Subset constraints sum_{i in S} R_i <= log2(1 + sum_{i in S} P_i / N).
/// Row r corresponds to the user subset with bitmask r + 1.
template <std::floating_point Scalar = double>
struct PolymatroidConstraints {
    Matrix<Scalar> membership;
    Vector<Scalar> bounds;
};

template <std::floating_point Scalar>
PolymatroidConstraints<Scalar> polymatroid_region(std::span<const Scalar> powers, const ChannelConfig<Scalar>& ch)
{
    const auto k = static_cast<int>(powers.size());
    if (k < 1 || k > kMaxPolymatroidUsers)
        throw DomainError("polymatroid needs between 1 and 16 users");
    for (Scalar p : powers)
        detail::require_power(p, "power");
    const Eigen::Index rows = (Eigen::Index{1} << k) - 1;
    PolymatroidConstraints<Scalar> out{Matrix<Scalar>::Zero(rows, k), Vector<Scalar>(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto mask = static_cast<std::uint32_t>(r + 1);
        Scalar total(0);
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                out.membership(r, i) = Scalar(1);
                total += powers[static_cast<std::size_t>(i)];
            }
        }
        out.bounds(r) = shannon_rate<Scalar>(total, ch);
    }
    return out;
}

} // namespace macregion
