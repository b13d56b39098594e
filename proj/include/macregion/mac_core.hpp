#pragma once

// Scalar rate formulas for the two-user Gaussian multiple access channel.
//
// All rates are in bits per channel use (base-2 logarithm) and all powers are
// linear. Every function is pure; inputs are validated by the domain types, so
// the formulas themselves are total.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "macregion/errors.hpp"
#include "macregion/types.hpp"

namespace macregion {

namespace detail {

template <std::floating_point Scalar>
void require_power(Scalar p, const char* what)
{
    if (!std::isfinite(p))
        throw DomainError(std::string(what) + " must be finite");
    if (p < Scalar(0))
        throw DomainError(std::string(what) + " must be nonnegative");
}

// log2(1 + x) without cancellation for small x.
template <std::floating_point Scalar>
Scalar log2_1p(Scalar x)
{
    return std::log1p(x) / std::numbers::ln2_v<Scalar>;
}

} // namespace detail

/// Noise power and total bandwidth of the shared channel.
///
/// Rates are per channel use of the whole band and an FD sub-band of fraction
/// alpha sees noise alpha * noise_power, so the bandwidth does not enter any
/// rate formula; it is carried for reporting.
template <std::floating_point Scalar = double>
class ChannelConfig {
public:
    explicit ChannelConfig(Scalar noise_power, Scalar bandwidth = Scalar(1))
        : noise_power_(noise_power), bandwidth_(bandwidth)
    {
        if (!std::isfinite(noise_power) || !(noise_power > Scalar(0)))
            throw DomainError("noise power must be positive and finite");
        if (!std::isfinite(bandwidth) || !(bandwidth > Scalar(0)))
            throw DomainError("bandwidth must be positive and finite");
    }

    Scalar noise_power() const { return noise_power_; }
    Scalar bandwidth() const { return bandwidth_; }

private:
    Scalar noise_power_;
    Scalar bandwidth_;
};

/// Individual power limits for the two users.
template <std::floating_point Scalar = double>
class PerUser {
public:
    PerUser(Scalar p1, Scalar p2) : p1_(p1), p2_(p2)
    {
        detail::require_power(p1, "power");
        detail::require_power(p2, "power");
    }

    Scalar p1() const { return p1_; }
    Scalar p2() const { return p2_; }
    Scalar total() const { return p1_ + p2_; }

private:
    Scalar p1_;
    Scalar p2_;
};

/// A single budget shared by both users.
template <std::floating_point Scalar = double>
class SumPower {
public:
    explicit SumPower(Scalar p_total) : p_total_(p_total) { detail::require_power(p_total, "power"); }

    Scalar total() const { return p_total_; }

private:
    Scalar p_total_;
};

template <std::floating_point Scalar = double>
using PowerBudget = std::variant<PerUser<Scalar>, SumPower<Scalar>>;

/// An achievable (R1, R2) point in bits per channel use.
template <std::floating_point Scalar = double>
class RatePair {
public:
    RatePair(Scalar r1, Scalar r2) : r1_(r1), r2_(r2)
    {
        if (!std::isfinite(r1) || !std::isfinite(r2) || r1 < Scalar(0) || r2 < Scalar(0))
            throw DomainError("rates must be finite and nonnegative");
    }

    Scalar r1() const { return r1_; }
    Scalar r2() const { return r2_; }
    Scalar sum() const { return r1_ + r2_; }
    Point2<Scalar> vector() const { return {r1_, r2_}; }

    friend bool operator==(const RatePair&, const RatePair&) = default;

private:
    Scalar r1_;
    Scalar r2_;
};

/// Fraction of time, bandwidth or power given to user 1.
template <std::floating_point Scalar = double>
class ResourceSplit {
public:
    explicit ResourceSplit(Scalar alpha) : alpha_(alpha)
    {
        if (!(alpha >= Scalar(0) && alpha <= Scalar(1)))
            throw DomainError("split fraction must lie in [0, 1]");
    }

    Scalar alpha() const { return alpha_; }
    Scalar complement() const { return Scalar(1) - alpha_; }

private:
    Scalar alpha_;
};

enum class Scheme { superposition, td, fd };

inline const char* to_string(Scheme s)
{
    switch (s) {
    case Scheme::superposition: return "sc";
    case Scheme::td: return "td";
    case Scheme::fd: return "fd";
    }
    return "?";
}

/// log2(1 + p / N).
template <std::floating_point Scalar>
Scalar shannon_rate(std::type_identity_t<Scalar> p, const ChannelConfig<Scalar>& ch)
{
    detail::require_power(p, "power");
    return detail::log2_1p(p / ch.noise_power());
}

/// Rate of a user decoded while `p_interference` is still present and treated as noise.
template <std::floating_point Scalar>
Scalar sic_rate(std::type_identity_t<Scalar> p_decode, std::type_identity_t<Scalar> p_interference,
                 const ChannelConfig<Scalar>& ch)
{
    detail::require_power(p_decode, "power");
    detail::require_power(p_interference, "interference power");
    return detail::log2_1p(p_decode / (p_interference + ch.noise_power()));
}

template <std::floating_point Scalar>
Scalar sum_capacity(const std::type_identity_t<PowerBudget<Scalar>>& budget, const ChannelConfig<Scalar>& ch)
{
    return std::visit([&](const auto& b) { return shannon_rate(b.total(), ch); }, budget);
}

/// The two SIC corners of the pentagon: ((C1, C2*), (C1*, C2)).
///
/// The first corner decodes user 2 first (user 1 as noise), the second decodes user 1 first.
template <std::floating_point Scalar>
std::pair<RatePair<Scalar>, RatePair<Scalar>> corner_points(const PerUser<Scalar>& b,
                                                             const ChannelConfig<Scalar>& ch)
{
    const Scalar c1 = shannon_rate(b.p1(), ch);
    const Scalar c2 = shannon_rate(b.p2(), ch);
    return {RatePair<Scalar>(c1, sic_rate(b.p2(), b.p1(), ch)),
            RatePair<Scalar>(sic_rate(b.p1(), b.p2(), ch), c2)};
}

template <std::floating_point Scalar>
std::pair<RatePair<Scalar>, RatePair<Scalar>> corner_points(const std::type_identity_t<PowerBudget<Scalar>>& budget,
                                                             const ChannelConfig<Scalar>& ch)
{
    const auto* per_user = std::get_if<PerUser<Scalar>>(&budget);
    if (per_user == nullptr)
        throw DomainError("corner points need a per-user budget; sum-power corners form a swept family");
    return corner_points(*per_user, ch);
}

template <std::floating_point Scalar>
RatePair<Scalar> td_rate_pair(const ResourceSplit<Scalar>& split, const std::type_identity_t<PowerBudget<Scalar>>& budget,
                              const ChannelConfig<Scalar>& ch)
{
    if (const auto* b = std::get_if<PerUser<Scalar>>(&budget))
        return {split.alpha() * shannon_rate(b->p1(), ch), split.complement() * shannon_rate(b->p2(), ch)};
    // In every slot the active user transmits with the whole budget.
    const Scalar full = shannon_rate(std::get<SumPower<Scalar>>(budget).total(), ch);
    return {split.alpha() * full, split.complement() * full};
}

namespace detail {

// fraction * log2(1 + p / (fraction * N)), continued to 0 at fraction = 0.
template <std::floating_point Scalar>
Scalar subband_rate(Scalar fraction, Scalar p, Scalar noise)
{
    if (fraction == Scalar(0) || p == Scalar(0))
        return Scalar(0);
    const Scalar snr = p / (fraction * noise);
    if (std::isfinite(snr))
        return fraction * log2_1p(snr);
    return fraction * (std::log2(p / noise) - std::log2(fraction));
}

} // namespace detail

template <std::floating_point Scalar>
RatePair<Scalar> fd_rate_pair(const ResourceSplit<Scalar>& split, const std::type_identity_t<PowerBudget<Scalar>>& budget,
                              const ChannelConfig<Scalar>& ch)
{
    if (const auto* b = std::get_if<PerUser<Scalar>>(&budget)) {
        return {detail::subband_rate(split.alpha(), b->p1(), ch.noise_power()),
                detail::subband_rate(split.complement(), b->p2(), ch.noise_power())};
    }
    // Power scales with bandwidth, so each sub-band keeps the full-band SNR.
    const Scalar full = shannon_rate(std::get<SumPower<Scalar>>(budget).total(), ch);
    return {split.alpha() * full, split.complement() * full};
}

/// The FD split where each user's power share equals its bandwidth share.
template <std::floating_point Scalar>
ResourceSplit<Scalar> fd_touch_split(const PerUser<Scalar>& b)
{
    if (!(b.total() > Scalar(0)))
        throw DomainError("touch split undefined when both powers are zero");
    return ResourceSplit<Scalar>(b.p1() / b.total());
}

/// Largest sum rate a scheme reaches over all splits. TD peaks at an endpoint;
/// FD peaks at the touch split, where it meets the sum capacity.
template <std::floating_point Scalar>
Scalar best_sum_rate(Scheme scheme, const std::type_identity_t<PowerBudget<Scalar>>& budget,
                     const ChannelConfig<Scalar>& ch)
{
    const auto* b = std::get_if<PerUser<Scalar>>(&budget);
    if (scheme == Scheme::td && b != nullptr)
        return std::max(shannon_rate<Scalar>(b->p1(), ch), shannon_rate<Scalar>(b->p2(), ch));
    return sum_capacity<Scalar>(budget, ch);
}

/// Rate pair of a scheme under a shared budget. For superposition the split is
/// the power fraction of user 1, and user 2 is decoded first.
template <std::floating_point Scalar>
RatePair<Scalar> sum_power_rate_pair(Scheme scheme, const ResourceSplit<Scalar>& split,
                                     std::type_identity_t<Scalar> p_total,
                                     const ChannelConfig<Scalar>& ch)
{
    const PowerBudget<Scalar> budget = SumPower<Scalar>(p_total);
    switch (scheme) {
    case Scheme::td: return td_rate_pair(split, budget, ch);
    case Scheme::fd: return fd_rate_pair(split, budget, ch);
    case Scheme::superposition: break;
    }
    const Scalar q1 = split.alpha() * p_total;
    const Scalar q2 = split.complement() * p_total;
    return {shannon_rate(q1, ch), sic_rate(q2, q1, ch)};
}

} // namespace macregion
