#ifndef RESOLV_INFO_MEASURES_HPP
#define RESOLV_INFO_MEASURES_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "resolv/channel.hpp"
#include "resolv/distribution.hpp"
#include "resolv/errors.hpp"
#include "resolv/math_util.hpp"

namespace resolv {

// Estimate with uncertainty, as reported by every Monte Carlo path.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// Moments of the information density under the joint input/output law.
struct InfoStats {
    double mutual_information = 0.0;   // nats
    double central_second_moment = 0.0; // V
    double abs_third_moment = 0.0;      // rho
    std::vector<std::pair<double, double>> mgf_grid;   // (t, E exp(t i))
    std::vector<std::pair<double, double>> renyi_grid; // (alpha, D_alpha)
};

// log dK(x,.)/dQy (y): +inf where the kernel puts mass outside the support of
// qy, -inf where the kernel density vanishes.
template <ChannelModel Ch, typename Qy>
    requires Density<Qy, typename Ch::OutputSymbol>
double information_density(const Ch& ch, const Qy& qy,
                           const typename Ch::InputSymbol& x,
                           const typename Ch::OutputSymbol& y) {
    const double num = ch.kernel_log_prob(x, y);
    if (num == kNegInf) return kNegInf;
    const double den = qy.log_prob(y);
    if (den == kNegInf) return kPosInf; // singular part
    return num - den;
}

// Per-letter sum with absorbing infinities; a NaN from (+inf) + (-inf) is
// settled in favor of -inf (the kernel term vanished, so the pair carries no
// kernel mass).
template <ChannelModel Ch, typename Qy>
    requires Density<Qy, typename Ch::OutputSymbol>
double block_information_density(const Ch& ch, const Qy& qy,
                                 std::span<const typename Ch::InputSymbol> xs,
                                 std::span<const typename Ch::OutputSymbol> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw DomainError("block_information_density: blocks must have equal length >= 1");
    bool saw_pos = false, saw_neg = false;
    double acc = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double v = information_density(ch, qy, xs[j], ys[j]);
        if (v == kPosInf) saw_pos = true;
        else if (v == kNegInf) saw_neg = true;
        else acc += v;
    }
    if (saw_neg) return kNegInf;
    if (saw_pos) return kPosInf;
    return acc;
}

// ---------------------------------------------------------------------------
// Exact computations for finite channels.
// ---------------------------------------------------------------------------

// Exact double sum; by construction of the induced output marginal this is
// always finite. Throws EstimationError if a non-finite value appears (which
// would mean qy is not the induced marginal).
double mutual_information(const FiniteChannel& ch, const DiscreteDistribution& qx);

// Closed form (1/2) ln(1 + P / noise_variance).
double mutual_information(const AwgnChannel& ch, const GaussianDistribution& qx);

// (V, rho): exact sums over the joint pmf.
std::pair<double, double> dispersion_moments(const FiniteChannel& ch,
                                             const DiscreteDistribution& qx);

// E exp(t i(X;Y)) exactly; +inf allowed when t > 0 hits the singular set.
double info_density_mgf(const FiniteChannel& ch, const DiscreteDistribution& qx,
                        double t);

// D_alpha for alpha > 1, evaluated through the mgf so the identity
// D_alpha = log mgf(alpha-1) / (alpha-1) holds by construction.
double renyi_divergence(const FiniteChannel& ch, const DiscreteDistribution& qx,
                        double alpha);

// Full stats bundle; default grids match the first-order parameter search.
InfoStats compute_info_stats(const FiniteChannel& ch, const DiscreteDistribution& qx,
                             std::span<const double> alphas = {},
                             std::span<const double> ts = {});

std::vector<double> default_alpha_grid(); // 1.01, 1.02, ..., 2.00

// ---------------------------------------------------------------------------
// Monte Carlo estimators for continuous channels (and cross-checks).
// Estimates carry (value, std_error, samples); deterministic per seed.
// ---------------------------------------------------------------------------

template <ChannelModel Ch, typename Qx, typename Qy>
    requires Density<Qx, typename Ch::InputSymbol> &&
             Density<Qy, typename Ch::OutputSymbol>
McEstimate mutual_information_mc(const Ch& ch, const Qx& qx, const Qy& qy,
                                 std::int64_t num_samples = 1000000,
                                 std::uint64_t seed = 0) {
    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < num_samples; ++i) {
        const auto x = qx.sample(rng);
        const auto y = ch.sample_output(x, rng);
        const double v = information_density(ch, qy, x, y);
        if (!std::isfinite(v))
            throw EstimationError("mutual_information_mc: non-finite density sample");
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(num_samples);
    McEstimate e;
    e.value = sum / n;
    e.std_error = std::sqrt(std::max(0.0, sumsq / n - e.value * e.value) / n);
    e.samples = num_samples;
    if (!std::isfinite(e.value))
        throw EstimationError("mutual_information_mc: estimate diverged");
    return e;
}

// (V, rho) by Monte Carlo around a supplied mean (pass the exact or closed
// form mutual information).
template <ChannelModel Ch, typename Qx, typename Qy>
    requires Density<Qx, typename Ch::InputSymbol> &&
             Density<Qy, typename Ch::OutputSymbol>
std::pair<McEstimate, McEstimate> dispersion_moments_mc(
    const Ch& ch, const Qx& qx, const Qy& qy, double mean_info,
    std::int64_t num_samples = 1000000, std::uint64_t seed = 0) {
    Rng rng(seed);
    double s2 = 0.0, s2sq = 0.0, s3 = 0.0, s3sq = 0.0;
    for (std::int64_t i = 0; i < num_samples; ++i) {
        const auto x = qx.sample(rng);
        const auto y = ch.sample_output(x, rng);
        const double v = information_density(ch, qy, x, y);
        if (!std::isfinite(v))
            throw EstimationError("dispersion_moments_mc: non-finite density sample");
        const double d = v - mean_info;
        const double d2 = d * d;
        const double d3 = std::abs(d) * d2;
        s2 += d2;
        s2sq += d2 * d2;
        s3 += d3;
        s3sq += d3 * d3;
    }
    const double n = static_cast<double>(num_samples);
    auto finish = [n, num_samples](double s, double ssq) {
        McEstimate e;
        e.value = s / n;
        e.std_error = std::sqrt(std::max(0.0, ssq / n - e.value * e.value) / n);
        e.samples = num_samples;
        return e;
    };
    return {finish(s2, s2sq), finish(s3, s3sq)};
}

} // namespace resolv

#endif
