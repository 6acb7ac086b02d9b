#ifndef RESOLV_DISTRIBUTION_HPP
#define RESOLV_DISTRIBUTION_HPP

#include <concepts>
#include <span>
#include <vector>

#include "resolv/alphabet.hpp"
#include "resolv/math_util.hpp"
#include "resolv/rng.hpp"

namespace resolv {

// A distribution usable as a sampling + density target for blocks of Sym.
template <typename D, typename Sym>
concept Density = requires(const D& d, const Sym& y, Rng& rng) {
    { d.log_prob(y) } -> std::convertible_to<double>;
    { d.sample(rng) } -> std::convertible_to<Sym>;
};

// --------------------------------------------------------------------------
// Finite alphabets: plain pmf with cached logs and cdf.
// --------------------------------------------------------------------------
class DiscreteDistribution {
public:
    using Symbol = int;

    explicit DiscreteDistribution(std::vector<double> pmf);

    static DiscreteDistribution uniform(int size);
    static DiscreteDistribution point_mass(int size, int at);

    int size() const { return static_cast<int>(pmf_.size()); }
    double prob(int symbol) const;
    double log_prob(int symbol) const;
    int sample(Rng& rng) const;

    const std::vector<double>& pmf() const { return pmf_; }
    Alphabet alphabet() const { return Alphabet::finite(size()); }

private:
    std::vector<double> pmf_;
    std::vector<double> log_pmf_;
    std::vector<double> cdf_;
};

// --------------------------------------------------------------------------
// Real line: Gaussian (input family and AWGN output marginal).
// --------------------------------------------------------------------------
class GaussianDistribution {
public:
    using Symbol = double;

    GaussianDistribution(double mean, double variance);

    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double log_prob(double y) const { return gaussian_log_density(y, mean_, variance_); }
    double sample(Rng& rng) const { return rng.normal(mean_, stddev_); }

private:
    double mean_;
    double variance_;
    double stddev_;
};

// Output symbol of a fading channel when the receiver observes the fade.
struct FadedSample {
    double fade = 1.0;  // fading amplitude, nonnegative
    double value = 0.0; // received value
};

// Joint law of (fade, value) when the input is N(0, signal_power) and the
// channel is Rayleigh fading with additive Gaussian noise. Conditioned on the
// fade h, the value is N(0, h^2 P + noise_variance).
class FadedGaussianMixture {
public:
    using Symbol = FadedSample;

    FadedGaussianMixture(double fading_power, double signal_power,
                         double noise_variance);

    double log_prob(const FadedSample& s) const;
    FadedSample sample(Rng& rng) const;

    double fading_power() const { return fading_power_; }
    double signal_power() const { return signal_power_; }
    double noise_variance() const { return noise_variance_; }

private:
    double fading_power_;
    double signal_power_;
    double noise_variance_;
};

// Quadrature-backed scalar output density: mixture over Gauss-Hermite nodes
// of the input law, each node pushed through a Gaussian kernel. Fallback for
// compositions without a closed form.
class QuadratureDensity {
public:
    using Symbol = double;

    // nodes are input points, log_weights their log mixture weights
    // (normalized), noise_variance the kernel's conditional variance.
    QuadratureDensity(std::vector<double> nodes, std::vector<double> log_weights,
                      double noise_variance);

    double log_prob(double y) const;
    double sample(Rng& rng) const;

private:
    std::vector<double> nodes_;
    std::vector<double> log_weights_;
    std::vector<double> weight_cdf_;
    double noise_variance_;
    double noise_stddev_;
};

// Rayleigh amplitude density with E[h^2] = mean_square; support [0, inf).
double rayleigh_log_density(double h, double mean_square);

// log of the n-fold product density: sum of per-symbol log_prob.
template <typename D, typename Sym>
    requires Density<D, Sym>
double product_log_prob(const D& dist, std::span<const Sym> block) {
    double acc = 0.0;
    for (const Sym& y : block) acc += dist.log_prob(y);
    return acc;
}

} // namespace resolv

#endif
