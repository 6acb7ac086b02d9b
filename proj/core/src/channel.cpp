#include "resolv/channel.hpp"

#include <algorithm>
#include <cmath>

#include "resolv/errors.hpp"
#include "resolv/quadrature.hpp"

namespace resolv {

namespace {
constexpr double kRowSumTolerance = 1e-12;
} // namespace

FiniteChannel::FiniteChannel(int num_inputs, int num_outputs,
                             std::vector<double> rows, std::string family)
    : num_inputs_(num_inputs),
      num_outputs_(num_outputs),
      rows_(std::move(rows)),
      family_(std::move(family)) {
    if (num_inputs_ < 1 || num_outputs_ < 1)
        throw DomainError("FiniteChannel: alphabets must be nonempty");
    if (rows_.size() != static_cast<std::size_t>(num_inputs_) * num_outputs_)
        throw DomainError("FiniteChannel: kernel size mismatch");
    log_rows_.reserve(rows_.size());
    row_cdf_.resize(rows_.size());
    for (int x = 0; x < num_inputs_; ++x) {
        double sum = 0.0;
        for (int y = 0; y < num_outputs_; ++y) {
            const double p = rows_[static_cast<std::size_t>(x) * num_outputs_ + y];
            if (!(p >= 0.0)) throw DomainError("FiniteChannel: negative kernel entry");
            sum += p;
            row_cdf_[static_cast<std::size_t>(x) * num_outputs_ + y] = sum;
            log_rows_.push_back(p > 0.0 ? std::log(p) : kNegInf);
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            throw DomainError("FiniteChannel: kernel row must sum to 1 within 1e-12");
        row_cdf_[static_cast<std::size_t>(x + 1) * num_outputs_ - 1] = 1.0;
    }
}

FiniteChannel FiniteChannel::bsc(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 1.0))
        throw DomainError("bsc: crossover must lie in [0,1]");
    return FiniteChannel(2, 2,
                         {1.0 - crossover, crossover, crossover, 1.0 - crossover},
                         "bsc");
}

FiniteChannel FiniteChannel::identity(int size) {
    std::vector<double> rows(static_cast<std::size_t>(size) * size, 0.0);
    for (int i = 0; i < size; ++i)
        rows[static_cast<std::size_t>(i) * size + i] = 1.0;
    return FiniteChannel(size, size, std::move(rows), "identity");
}

FiniteChannel FiniteChannel::from_rows(
    const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("from_rows: no rows");
    const int ny = static_cast<int>(rows.front().size());
    std::vector<double> flat;
    flat.reserve(rows.size() * ny);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != ny)
            throw DomainError("from_rows: ragged kernel rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return FiniteChannel(static_cast<int>(rows.size()), ny, std::move(flat));
}

void FiniteChannel::check_input(int x) const {
    if (x < 0 || x >= num_inputs_)
        throw DomainError("FiniteChannel: input symbol out of alphabet");
}

void FiniteChannel::check_output(int y) const {
    if (y < 0 || y >= num_outputs_)
        throw DomainError("FiniteChannel: output symbol out of alphabet");
}

double FiniteChannel::kernel(int x, int y) const {
    check_input(x);
    check_output(y);
    return rows_[static_cast<std::size_t>(x) * num_outputs_ + y];
}

double FiniteChannel::kernel_log_prob(int x, int y) const {
    check_input(x);
    check_output(y);
    return log_rows_[static_cast<std::size_t>(x) * num_outputs_ + y];
}

int FiniteChannel::sample_output(int x, Rng& rng) const {
    check_input(x);
    const double u = rng.uniform01();
    const auto begin = row_cdf_.begin() + static_cast<std::ptrdiff_t>(x) * num_outputs_;
    const auto end = begin + num_outputs_;
    const auto it = std::upper_bound(begin, end, u);
    const auto idx = std::distance(begin, it);
    return static_cast<int>(idx < num_outputs_ ? idx : num_outputs_ - 1);
}

std::span<const double> FiniteChannel::row(int x) const {
    check_input(x);
    return {rows_.data() + static_cast<std::size_t>(x) * num_outputs_,
            static_cast<std::size_t>(num_outputs_)};
}

AwgnChannel::AwgnChannel(double noise_variance)
    : noise_variance_(noise_variance), noise_stddev_(std::sqrt(noise_variance)) {
    if (!(noise_variance > 0.0))
        throw DomainError("AwgnChannel: noise variance must be positive");
}

RayleighChannel::RayleighChannel(double fading_power, double noise_variance)
    : fading_power_(fading_power),
      noise_variance_(noise_variance),
      noise_stddev_(std::sqrt(noise_variance)) {
    if (!(fading_power > 0.0) || !(noise_variance > 0.0))
        throw DomainError("RayleighChannel: parameters must be positive");
}

DiscreteDistribution output_distribution(const FiniteChannel& ch,
                                         const DiscreteDistribution& qx) {
    if (qx.size() != ch.num_inputs())
        throw DomainError("output_distribution: input distribution size mismatch");
    std::vector<double> qy(ch.num_outputs(), 0.0);
    for (int x = 0; x < ch.num_inputs(); ++x) {
        const double w = qx.prob(x);
        if (w == 0.0) continue;
        const auto row = ch.row(x);
        for (int y = 0; y < ch.num_outputs(); ++y) qy[y] += w * row[y];
    }
    // Guard against accumulation drift beyond the constructor's tolerance.
    double sum = 0.0;
    for (double p : qy) sum += p;
    for (double& p : qy) p /= sum;
    return DiscreteDistribution(std::move(qy));
}

GaussianDistribution output_distribution(const AwgnChannel& ch,
                                         const GaussianDistribution& qx) {
    return GaussianDistribution(qx.mean(), qx.variance() + ch.noise_variance());
}

FadedGaussianMixture output_distribution(const RayleighChannel& ch,
                                         const GaussianDistribution& qx) {
    if (qx.mean() != 0.0)
        throw UnsupportedCompositionError(
            "output_distribution: Rayleigh fading requires a zero-mean Gaussian input");
    return FadedGaussianMixture(ch.fading_power(), qx.variance(),
                                ch.noise_variance());
}

QuadratureDensity quadrature_output_distribution(const AwgnChannel& ch,
                                                 const GaussianDistribution& qx,
                                                 int order) {
    const GaussHermiteRule rule = gauss_hermite(order);
    const double scale = std::sqrt(2.0 * qx.variance());
    std::vector<double> nodes(rule.nodes.size());
    std::vector<double> log_weights(rule.nodes.size());
    const double log_norm = -0.5 * std::log(3.14159265358979323846);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        nodes[i] = qx.mean() + scale * rule.nodes[i];
        log_weights[i] = std::log(rule.weights[i]) + log_norm;
    }
    // Renormalize exactly; GH weights sum to sqrt(pi) only up to rounding.
    const double lse = log_sum_exp(log_weights);
    for (double& lw : log_weights) lw -= lse;
    return QuadratureDensity(std::move(nodes), std::move(log_weights),
                             ch.noise_variance());
}

} // namespace resolv
