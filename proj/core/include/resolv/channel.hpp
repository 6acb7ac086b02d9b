#ifndef RESOLV_CHANNEL_HPP
#define RESOLV_CHANNEL_HPP

#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "resolv/alphabet.hpp"
#include "resolv/distribution.hpp"
#include "resolv/rng.hpp"

namespace resolv {

// A memoryless channel: pointwise log kernel plus a conditional sampler.
// Blocks act i.i.d. per letter; nothing in the library assumes more.
template <typename Ch>
concept ChannelModel =
    requires(const Ch& ch, const typename Ch::InputSymbol& x,
             const typename Ch::OutputSymbol& y, Rng& rng) {
        { ch.kernel_log_prob(x, y) } -> std::convertible_to<double>;
        { ch.sample_output(x, rng) } -> std::convertible_to<typename Ch::OutputSymbol>;
    };

// Channels whose output alphabet is finite and indexable; required by the
// exact-enumeration paths. Inputs may still be continuous (quantized views).
template <typename Ch>
concept FiniteOutputChannel =
    ChannelModel<Ch> && std::same_as<typename Ch::OutputSymbol, int> &&
    requires(const Ch& ch, const typename Ch::InputSymbol& x, int y) {
        { ch.num_outputs() } -> std::convertible_to<int>;
        { ch.kernel(x, y) } -> std::convertible_to<double>;
    };

// --------------------------------------------------------------------------
// Discrete memoryless channel, row-stochastic kernel matrix.
// --------------------------------------------------------------------------
class FiniteChannel {
public:
    using InputSymbol = int;
    using OutputSymbol = int;

    // rows: row-major kernel, rows[x * num_outputs + y]; each row must sum to
    // 1 within 1e-12.
    FiniteChannel(int num_inputs, int num_outputs, std::vector<double> rows,
                  std::string family = "dmc");

    static FiniteChannel bsc(double crossover);
    static FiniteChannel identity(int size);
    static FiniteChannel from_rows(const std::vector<std::vector<double>>& rows);

    int num_inputs() const { return num_inputs_; }
    int num_outputs() const { return num_outputs_; }
    const std::string& family() const { return family_; }

    double kernel(int x, int y) const;
    double kernel_log_prob(int x, int y) const;
    int sample_output(int x, Rng& rng) const;

    // Row x as a span of probabilities.
    std::span<const double> row(int x) const;

    Alphabet input_alphabet() const { return Alphabet::finite(num_inputs_); }
    Alphabet output_alphabet() const { return Alphabet::finite(num_outputs_); }

private:
    void check_input(int x) const;
    void check_output(int y) const;

    int num_inputs_;
    int num_outputs_;
    std::vector<double> rows_;
    std::vector<double> log_rows_;
    std::vector<double> row_cdf_;
    std::string family_;
};

// --------------------------------------------------------------------------
// Additive white Gaussian noise on the real line.
// --------------------------------------------------------------------------
class AwgnChannel {
public:
    using InputSymbol = double;
    using OutputSymbol = double;

    explicit AwgnChannel(double noise_variance);

    double noise_variance() const { return noise_variance_; }

    double kernel_log_prob(double x, double y) const {
        return gaussian_log_density(y, x, noise_variance_);
    }
    double sample_output(double x, Rng& rng) const {
        return rng.normal(x, noise_stddev_);
    }

private:
    double noise_variance_;
    double noise_stddev_;
};

// --------------------------------------------------------------------------
// Rayleigh fading with additive Gaussian noise; the receiver observes the
// fade, so the output symbol is the pair (fade, value).
// --------------------------------------------------------------------------
class RayleighChannel {
public:
    using InputSymbol = double;
    using OutputSymbol = FadedSample;

    RayleighChannel(double fading_power, double noise_variance);

    double fading_power() const { return fading_power_; }
    double noise_variance() const { return noise_variance_; }

    double kernel_log_prob(double x, const FadedSample& s) const {
        const double lf = rayleigh_log_density(s.fade, fading_power_);
        if (lf == kNegInf) return kNegInf;
        return lf + gaussian_log_density(s.value, s.fade * x, noise_variance_);
    }
    FadedSample sample_output(double x, Rng& rng) const {
        FadedSample s;
        s.fade = rng.rayleigh(fading_power_);
        s.value = rng.normal(s.fade * x, noise_stddev_);
        return s;
    }

private:
    double fading_power_;
    double noise_variance_;
    double noise_stddev_;
};

static_assert(ChannelModel<FiniteChannel>);
static_assert(ChannelModel<AwgnChannel>);
static_assert(ChannelModel<RayleighChannel>);
static_assert(FiniteOutputChannel<FiniteChannel>);

// --------------------------------------------------------------------------
// Induced output marginals.
// --------------------------------------------------------------------------

// Exact matrix-vector product.
DiscreteDistribution output_distribution(const FiniteChannel& ch,
                                         const DiscreteDistribution& qx);

// Gaussian input through AWGN: Gaussian convolution.
GaussianDistribution output_distribution(const AwgnChannel& ch,
                                         const GaussianDistribution& qx);

// Gaussian input through Rayleigh fading, fade visible at the receiver.
FadedGaussianMixture output_distribution(const RayleighChannel& ch,
                                         const GaussianDistribution& qx);

// Quadrature fallback for scalar-output compositions without a closed form;
// Gauss-Hermite mixture of the input law through the Gaussian kernel.
QuadratureDensity quadrature_output_distribution(const AwgnChannel& ch,
                                                 const GaussianDistribution& qx,
                                                 int order = 64);

// --------------------------------------------------------------------------
// Block sampling.
// --------------------------------------------------------------------------

template <typename In, typename Out>
struct BlockSample {
    std::vector<In> x;
    std::vector<Out> y;
    int block_length() const { return static_cast<int>(x.size()); }
};

// y_j ~ K(x_j, .) independently; deterministic given the seed.
template <ChannelModel Ch>
std::vector<typename Ch::OutputSymbol> sample_block(
    const Ch& ch, std::span<const typename Ch::InputSymbol> x_block,
    std::uint64_t seed) {
    Rng rng(seed);
    std::vector<typename Ch::OutputSymbol> out;
    out.reserve(x_block.size());
    for (const auto& x : x_block) out.push_back(ch.sample_output(x, rng));
    return out;
}

// Joint block draw (X^n, Y^n) with X ~ qx i.i.d.; used by the MC estimators.
template <ChannelModel Ch, typename Qx>
    requires Density<Qx, typename Ch::InputSymbol>
BlockSample<typename Ch::InputSymbol, typename Ch::OutputSymbol>
draw_block_sample(const Ch& ch, const Qx& qx, int n, Rng& rng) {
    BlockSample<typename Ch::InputSymbol, typename Ch::OutputSymbol> b;
    b.x.reserve(n);
    b.y.reserve(n);
    for (int j = 0; j < n; ++j) {
        auto x = qx.sample(rng);
        b.y.push_back(ch.sample_output(x, rng));
        b.x.push_back(std::move(x));
    }
    return b;
}

} // namespace resolv

#endif
