#include "resolv/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "resolv/errors.hpp"
#include "resolv/quadrature.hpp"

namespace resolv {

namespace {
constexpr double kPmfSumTolerance = 1e-12;
constexpr double kDensityIntegralTolerance = 1e-6;
} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> pmf)
    : pmf_(std::move(pmf)) {
    if (pmf_.empty()) throw DomainError("DiscreteDistribution: empty pmf");
    double sum = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0)) throw DomainError("DiscreteDistribution: negative pmf entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kPmfSumTolerance)
        throw DomainError("DiscreteDistribution: pmf must sum to 1 within 1e-12");
    log_pmf_.reserve(pmf_.size());
    cdf_.reserve(pmf_.size());
    double acc = 0.0;
    for (double p : pmf_) {
        log_pmf_.push_back(p > 0.0 ? std::log(p) : kNegInf);
        acc += p;
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::uniform(int size) {
    if (size < 1) throw DomainError("uniform: size must be >= 1");
    return DiscreteDistribution(std::vector<double>(size, 1.0 / size));
}

DiscreteDistribution DiscreteDistribution::point_mass(int size, int at) {
    if (at < 0 || at >= size) throw DomainError("point_mass: symbol out of alphabet");
    std::vector<double> pmf(size, 0.0);
    pmf[at] = 1.0;
    return DiscreteDistribution(std::move(pmf));
}

double DiscreteDistribution::prob(int symbol) const {
    if (symbol < 0 || symbol >= size())
        throw DomainError("DiscreteDistribution: symbol out of alphabet");
    return pmf_[symbol];
}

double DiscreteDistribution::log_prob(int symbol) const {
    if (symbol < 0 || symbol >= size())
        throw DomainError("DiscreteDistribution: symbol out of alphabet");
    return log_pmf_[symbol];
}

int DiscreteDistribution::sample(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = std::distance(cdf_.begin(), it);
    return static_cast<int>(idx < size() ? idx : size() - 1);
}

GaussianDistribution::GaussianDistribution(double mean, double variance)
    : mean_(mean), variance_(variance), stddev_(std::sqrt(variance)) {
    if (!(variance > 0.0))
        throw DomainError("GaussianDistribution: variance must be positive");
    // Normalization audit per construction contract.
    static const GaussHermiteRule rule = gauss_hermite(64);
    const double integral =
        rule.gaussian_expectation(mean, variance, [](double) { return 1.0; });
    if (std::abs(integral - 1.0) > kDensityIntegralTolerance)
        throw DomainError("GaussianDistribution: density does not integrate to 1");
}

FadedGaussianMixture::FadedGaussianMixture(double fading_power,
                                           double signal_power,
                                           double noise_variance)
    : fading_power_(fading_power),
      signal_power_(signal_power),
      noise_variance_(noise_variance) {
    if (!(fading_power > 0.0) || !(signal_power >= 0.0) || !(noise_variance > 0.0))
        throw DomainError("FadedGaussianMixture: invalid parameters");
    // The fade marginal integrates to 1 - exp(-T^2/omega); check at a wide cut.
    const double hi = 12.0 * std::sqrt(fading_power);
    const double mass = 1.0 - std::exp(-hi * hi / fading_power);
    if (std::abs(mass - 1.0) > kDensityIntegralTolerance)
        throw DomainError("FadedGaussianMixture: fade density does not normalize");
}

double FadedGaussianMixture::log_prob(const FadedSample& s) const {
    const double lf = rayleigh_log_density(s.fade, fading_power_);
    if (lf == kNegInf) return kNegInf;
    const double cond_var = s.fade * s.fade * signal_power_ + noise_variance_;
    return lf + gaussian_log_density(s.value, 0.0, cond_var);
}

FadedSample FadedGaussianMixture::sample(Rng& rng) const {
    FadedSample s;
    s.fade = rng.rayleigh(fading_power_);
    const double cond_var = s.fade * s.fade * signal_power_ + noise_variance_;
    s.value = rng.normal(0.0, std::sqrt(cond_var));
    return s;
}

double rayleigh_log_density(double h, double mean_square) {
    if (h <= 0.0) return kNegInf;
    return std::log(2.0 * h / mean_square) - h * h / mean_square;
}

QuadratureDensity::QuadratureDensity(std::vector<double> nodes,
                                     std::vector<double> log_weights,
                                     double noise_variance)
    : nodes_(std::move(nodes)),
      log_weights_(std::move(log_weights)),
      noise_variance_(noise_variance),
      noise_stddev_(std::sqrt(noise_variance)) {
    if (nodes_.empty() || nodes_.size() != log_weights_.size())
        throw DomainError("QuadratureDensity: nodes/weights mismatch");
    if (!(noise_variance > 0.0))
        throw DomainError("QuadratureDensity: noise variance must be positive");
    double total = 0.0;
    weight_cdf_.reserve(nodes_.size());
    for (double lw : log_weights_) {
        total += std::exp(lw);
        weight_cdf_.push_back(total);
    }
    if (std::abs(total - 1.0) > kDensityIntegralTolerance)
        throw DomainError("QuadratureDensity: weights do not normalize");
    weight_cdf_.back() = 1.0;
}

double QuadratureDensity::log_prob(double y) const {
    double m = kNegInf;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double t =
            log_weights_[i] + gaussian_log_density(y, nodes_[i], noise_variance_);
        if (t > m) m = t;
    }
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double t =
            log_weights_[i] + gaussian_log_density(y, nodes_[i], noise_variance_);
        s += std::exp(t - m);
    }
    return m + std::log(s);
}

double QuadratureDensity::sample(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(weight_cdf_.begin(), weight_cdf_.end(), u);
    const auto idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(std::distance(weight_cdf_.begin(), it),
                                 static_cast<std::ptrdiff_t>(nodes_.size()) - 1));
    return rng.normal(nodes_[idx], noise_stddev_);
}

} // namespace resolv
