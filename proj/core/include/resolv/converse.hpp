#ifndef RESOLV_CONVERSE_HPP
#define RESOLV_CONVERSE_HPP

#include <cstdint>
#include <vector>

#include "resolv/channel.hpp"
#include "resolv/codebook.hpp"
#include "resolv/distribution.hpp"

namespace resolv {

// Partition of the real line into bins by sorted interior edges.
// k bins correspond to k-1 edges; the trivial quantizer has none.
class Quantizer {
public:
    static Quantizer trivial() { return Quantizer({}); }
    static Quantizer from_edges(std::vector<double> edges);
    // Bin edges at the target's quantiles, so each bin carries mass 1/k.
    // Dyadic k values nest: every edge of level k reappears at level 2k.
    static Quantizer equiprobable(const GaussianDistribution& qy, int k);

    int num_bins() const { return static_cast<int>(edges_.size()) + 1; }
    int bin_of(double y) const;
    const std::vector<double>& edges() const { return edges_; }

    // True when every edge of `coarser` is also an edge of this quantizer.
    bool refines(const Quantizer& coarser) const;

private:
    explicit Quantizer(std::vector<double> edges) : edges_(std::move(edges)) {}
    std::vector<double> edges_;
};

// AWGN with its output collapsed onto quantizer bins: a finite-output channel
// whose inputs remain real. Rows are Gaussian CDF differences.
class QuantizedAwgn {
public:
    using InputSymbol = double;
    using OutputSymbol = int;

    QuantizedAwgn(AwgnChannel channel, Quantizer quantizer);

    int num_outputs() const { return quantizer_.num_bins(); }
    double kernel(double x, int bin) const;
    double kernel_log_prob(double x, int bin) const;
    int sample_output(double x, Rng& rng) const;
    std::vector<double> row(double x) const;

    const Quantizer& quantizer() const { return quantizer_; }

private:
    AwgnChannel channel_;
    Quantizer quantizer_;
};

static_assert(FiniteOutputChannel<QuantizedAwgn>);

// Finite channels admit only the trivial quantization; returns the channel
// unchanged, erroring on a nontrivial quantizer.
FiniteChannel quantize_channel(const FiniteChannel& ch, const Quantizer& q);
QuantizedAwgn quantize_channel(const AwgnChannel& ch, const Quantizer& q);

// Bin masses of a scalar target under the partition.
DiscreteDistribution quantize_distribution(const GaussianDistribution& qy,
                                           const Quantizer& q);

// Uniform input grid over a compact interval; continuous codewords snap to
// the nearest grid point before the averaged-input computation.
struct InputGrid {
    double lo = -4.0;
    double hi = 4.0;
    int levels = 64;

    double point(int i) const;
    int snap(double x) const;
};

// Position-averaged empirical input distribution of a codebook:
// (1/n) sum_j P_{X_j | C}.
struct AveragedInput {
    DiscreteDistribution dist;         // over the (finite or grid) alphabet
    std::vector<double> support;       // grid points; empty for finite inputs
    int n = 0;
};

AveragedInput averaged_input(const Codebook<int>& cb, int alphabet_size);
AveragedInput averaged_input(const Codebook<double>& cb, const InputGrid& grid);

// Single-letter converse audit: with measured approximation error delta, the
// averaged-input mutual information must satisfy
//   I <= R - delta log(delta / (2 |Y|))  (+ numerical tolerance).
struct ConverseReport {
    int n = 0;
    double rate = 0.0;
    double delta = 0.0;
    int output_size = 0;
    double mi_averaged = 0.0; // mutual information of the averaged input
    double slack = 0.0;       // -delta log(delta / (2 |Y|)) >= 0
    bool holds = false;
};

ConverseReport converse_check(const FiniteChannel& ch, const Codebook<int>& cb,
                              double delta);
ConverseReport converse_check(const QuantizedAwgn& ch, const Codebook<double>& cb,
                              const InputGrid& grid, double delta);

// Exact two-sided comparison of the position-averaged per-letter TV against
// the block TV (the per-letter value can never exceed the block value).
struct PerLetterTvCheck {
    double per_letter_tv = 0.0;
    double block_tv = 0.0;
    bool holds = false;
};

PerLetterTvCheck per_letter_tv_bound_check(
    const FiniteChannel& ch, const Codebook<int>& cb,
    const DiscreteDistribution& qy,
    std::int64_t enumeration_cap = kDefaultEnumerationCap);

// Mutual information of a finitely supported input (weights) pushed through
// explicit kernel rows; shared by the converse checks.
double mutual_information_weighted(const std::vector<double>& weights,
                                   const std::vector<std::vector<double>>& rows);

} // namespace resolv

#endif
