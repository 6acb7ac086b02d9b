#include "resolv/converse.hpp"

#include <algorithm>
#include <cmath>

#include "resolv/errors.hpp"
#include "resolv/math_util.hpp"

namespace resolv {

Quantizer Quantizer::from_edges(std::vector<double> edges) {
    if (!std::is_sorted(edges.begin(), edges.end()))
        throw DomainError("Quantizer: edges must be sorted");
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw DomainError("Quantizer: edges must be distinct");
    return Quantizer(std::move(edges));
}

Quantizer Quantizer::equiprobable(const GaussianDistribution& qy, int k) {
    if (k < 1) throw DomainError("Quantizer: need at least one bin");
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(k) - 1);
    const double s = std::sqrt(qy.variance());
    for (int i = 1; i < k; ++i)
        edges.push_back(qy.mean() +
                        s * gaussian_quantile(static_cast<double>(i) / k));
    return Quantizer(std::move(edges));
}

int Quantizer::bin_of(double y) const {
    // bin i covers (edges[i-1], edges[i]]; the first extends to -inf
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), y);
    return static_cast<int>(std::distance(edges_.begin(), it));
}

bool Quantizer::refines(const Quantizer& coarser) const {
    for (double e : coarser.edges_) {
        const auto it = std::lower_bound(edges_.begin(), edges_.end(),
                                         e - 1e-12 * (1.0 + std::abs(e)));
        if (it == edges_.end() ||
            std::abs(*it - e) > 1e-12 * (1.0 + std::abs(e)))
            return false;
    }
    return true;
}

QuantizedAwgn::QuantizedAwgn(AwgnChannel channel, Quantizer quantizer)
    : channel_(channel), quantizer_(std::move(quantizer)) {}

double QuantizedAwgn::kernel(double x, int bin) const {
    const int k = num_outputs();
    if (bin < 0 || bin >= k)
        throw DomainError("QuantizedAwgn: output bin out of range");
    const double s = std::sqrt(channel_.noise_variance());
    const auto& e = quantizer_.edges();
    // The unbounded end bins use a single tail evaluation so far-out masses
    // survive instead of cancelling between two CDFs near 1.
    if (bin == k - 1) {
        if (k == 1) return 1.0;
        return q_function((e[static_cast<std::size_t>(k) - 2] - x) / s);
    }
    const double hi_cdf = gaussian_cdf((e[static_cast<std::size_t>(bin)] - x) / s);
    const double lo_cdf =
        bin == 0 ? 0.0 : gaussian_cdf((e[static_cast<std::size_t>(bin) - 1] - x) / s);
    return std::max(0.0, hi_cdf - lo_cdf);
}

double QuantizedAwgn::kernel_log_prob(double x, int bin) const {
    const double p = kernel(x, bin);
    return p > 0.0 ? std::log(p) : kNegInf;
}

int QuantizedAwgn::sample_output(double x, Rng& rng) const {
    return quantizer_.bin_of(channel_.sample_output(x, rng));
}

std::vector<double> QuantizedAwgn::row(double x) const {
    std::vector<double> r(static_cast<std::size_t>(num_outputs()));
    for (int b = 0; b < num_outputs(); ++b)
        r[static_cast<std::size_t>(b)] = kernel(x, b);
    return r;
}

FiniteChannel quantize_channel(const FiniteChannel& ch, const Quantizer& q) {
    if (q.num_bins() != 1)
        throw UnsupportedCompositionError(
            "quantize_channel: finite outputs admit only the trivial quantizer");
    return ch;
}

QuantizedAwgn quantize_channel(const AwgnChannel& ch, const Quantizer& q) {
    return QuantizedAwgn(ch, q);
}

DiscreteDistribution quantize_distribution(const GaussianDistribution& qy,
                                           const Quantizer& q) {
    const int k = q.num_bins();
    const double s = std::sqrt(qy.variance());
    std::vector<double> pmf(static_cast<std::size_t>(k));
    double total = 0.0;
    for (int b = 0; b < k; ++b) {
        const double hi =
            b == k - 1 ? 1.0
                       : gaussian_cdf((q.edges()[static_cast<std::size_t>(b)] -
                                       qy.mean()) / s);
        const double lo =
            b == 0 ? 0.0
                   : gaussian_cdf((q.edges()[static_cast<std::size_t>(b) - 1] -
                                   qy.mean()) / s);
        pmf[static_cast<std::size_t>(b)] = std::max(0.0, hi - lo);
        total += pmf[static_cast<std::size_t>(b)];
    }
    for (double& p : pmf) p /= total;
    return DiscreteDistribution(std::move(pmf));
}

double InputGrid::point(int i) const {
    if (levels < 2) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / (levels - 1);
}

int InputGrid::snap(double x) const {
    if (levels < 2) return 0;
    const double step = (hi - lo) / (levels - 1);
    const double idx = std::round((x - lo) / step);
    return static_cast<int>(std::clamp(idx, 0.0, static_cast<double>(levels - 1)));
}

AveragedInput averaged_input(const Codebook<int>& cb, int alphabet_size) {
    std::vector<double> counts(static_cast<std::size_t>(alphabet_size), 0.0);
    for (int sym : cb.symbols) {
        if (sym < 0 || sym >= alphabet_size)
            throw DomainError("averaged_input: codeword symbol out of alphabet");
        counts[static_cast<std::size_t>(sym)] += 1.0;
    }
    const double total = static_cast<double>(cb.symbols.size());
    for (double& c : counts) c /= total;
    AveragedInput out{DiscreteDistribution(std::move(counts)), {}, cb.n};
    return out;
}

AveragedInput averaged_input(const Codebook<double>& cb, const InputGrid& grid) {
    std::vector<double> counts(static_cast<std::size_t>(grid.levels), 0.0);
    for (double sym : cb.symbols)
        counts[static_cast<std::size_t>(grid.snap(sym))] += 1.0;
    const double total = static_cast<double>(cb.symbols.size());
    for (double& c : counts) c /= total;
    std::vector<double> support(static_cast<std::size_t>(grid.levels));
    for (int i = 0; i < grid.levels; ++i)
        support[static_cast<std::size_t>(i)] = grid.point(i);
    AveragedInput out{DiscreteDistribution(std::move(counts)), std::move(support),
                      cb.n};
    return out;
}

double mutual_information_weighted(const std::vector<double>& weights,
                                   const std::vector<std::vector<double>>& rows) {
    if (weights.size() != rows.size())
        throw DomainError("mutual_information_weighted: size mismatch");
    if (rows.empty()) throw DomainError("mutual_information_weighted: empty input");
    const std::size_t ny = rows.front().size();
    std::vector<double> qbar(ny, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ny)
            throw DomainError("mutual_information_weighted: ragged rows");
        for (std::size_t y = 0; y < ny; ++y) qbar[y] += weights[i] * rows[i][y];
    }
    double mi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (weights[i] == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) {
            const double p = rows[i][y];
            if (p == 0.0) continue;
            mi += weights[i] * p * std::log(p / qbar[y]);
        }
    }
    return mi;
}

namespace {

double converse_slack(double delta, int output_size) {
    if (!(delta >= 0.0))
        throw DomainError("converse_check: delta must be nonnegative");
    if (delta > 0.25)
        throw HypothesisViolationError("converse_check: requires delta <= 1/4");
    if (delta == 0.0) return 0.0; // limit of -x log x
    return -delta * std::log(delta / (2.0 * output_size));
}

ConverseReport make_report(int n, double rate, double delta, int output_size,
                           double mi_avg) {
    ConverseReport r;
    r.n = n;
    r.rate = rate;
    r.delta = delta;
    r.output_size = output_size;
    r.mi_averaged = mi_avg;
    r.slack = converse_slack(delta, output_size);
    r.holds = mi_avg <= rate + r.slack + 1e-9;
    return r;
}

} // namespace

ConverseReport converse_check(const FiniteChannel& ch, const Codebook<int>& cb,
                              double delta) {
    const AveragedInput avg = averaged_input(cb, ch.num_inputs());
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(ch.num_inputs()));
    for (int x = 0; x < ch.num_inputs(); ++x) {
        const auto row = ch.row(x);
        rows[static_cast<std::size_t>(x)].assign(row.begin(), row.end());
    }
    const double mi = mutual_information_weighted(avg.dist.pmf(), rows);
    return make_report(cb.n, cb.rate, delta, ch.num_outputs(), mi);
}

ConverseReport converse_check(const QuantizedAwgn& ch, const Codebook<double>& cb,
                              const InputGrid& grid, double delta) {
    const AveragedInput avg = averaged_input(cb, grid);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(grid.levels));
    for (int i = 0; i < grid.levels; ++i)
        rows[static_cast<std::size_t>(i)] = ch.row(grid.point(i));
    const double mi = mutual_information_weighted(avg.dist.pmf(), rows);
    return make_report(cb.n, cb.rate, delta, ch.num_outputs(), mi);
}

PerLetterTvCheck per_letter_tv_bound_check(const FiniteChannel& ch,
                                           const Codebook<int>& cb,
                                           const DiscreteDistribution& qy,
                                           std::int64_t enumeration_cap) {
    // Position-averaged output marginal: averaged input pushed through K.
    const AveragedInput avg = averaged_input(cb, ch.num_inputs());
    const DiscreteDistribution qy_avg = output_distribution(ch, avg.dist);
    double lhs = 0.0;
    for (int y = 0; y < ch.num_outputs(); ++y) {
        const double d = qy_avg.prob(y) - qy.prob(y);
        if (d > 0.0) lhs += d;
    }
    PerLetterTvCheck out;
    out.per_letter_tv = lhs;
    out.block_tv = tv_exact(ch, cb, qy, enumeration_cap).tv;
    out.holds = out.per_letter_tv <= out.block_tv + 1e-12;
    return out;
}

} // namespace resolv
