#ifndef RESOLV_CODEBOOK_HPP
#define RESOLV_CODEBOOK_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resolv/channel.hpp"
#include "resolv/distribution.hpp"
#include "resolv/errors.hpp"
#include "resolv/info_measures.hpp"
#include "resolv/math_util.hpp"
#include "resolv/rng.hpp"

namespace resolv {

inline constexpr std::int64_t kDefaultCodebookCap = std::int64_t{1} << 24;
inline constexpr std::int64_t kDefaultEnumerationCap = std::int64_t{1} << 20;

// Number of codewords for block length n at rate R (nats/symbol):
// max(1, floor(exp(nR))), with a guard that treats exp(nR) as the integer it
// is meant to be when it lands within rounding error of one.
std::int64_t codebook_size(int n, double rate,
                           std::int64_t max_codewords = kDefaultCodebookCap);

template <typename Sym>
struct Codebook {
    int n = 0;
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::vector<Sym> symbols; // M x n, row-major

    std::int64_t num_codewords() const {
        return n == 0 ? 0 : static_cast<std::int64_t>(symbols.size()) / n;
    }
    std::span<const Sym> codeword(std::int64_t m) const {
        return {symbols.data() + m * n, static_cast<std::size_t>(n)};
    }
};

// M * n i.i.d. symbols from qx; deterministic per seed.
template <typename Qx>
    requires Density<Qx, typename Qx::Symbol>
Codebook<typename Qx::Symbol> draw_codebook(
    const Qx& qx, int n, double rate, std::uint64_t seed,
    std::int64_t max_codewords = kDefaultCodebookCap) {
    if (n < 1) throw DomainError("draw_codebook: block length must be >= 1");
    if (!(rate >= 0.0)) throw DomainError("draw_codebook: rate must be >= 0");
    const std::int64_t m = codebook_size(n, rate, max_codewords);
    Codebook<typename Qx::Symbol> cb;
    cb.n = n;
    cb.rate = rate;
    cb.seed = seed;
    cb.symbols.reserve(static_cast<std::size_t>(m) * n);
    Rng rng(seed);
    for (std::int64_t i = 0; i < m * n; ++i) cb.symbols.push_back(qx.sample(rng));
    return cb;
}

// log of the codebook-induced output block probability/density,
// log[ M^{-1} sum_m prod_j K(C(m)_j, y_j) ], via log-sum-exp.
template <ChannelModel Ch>
double induced_output_log_prob(const Ch& ch,
                               const Codebook<typename Ch::InputSymbol>& cb,
                               std::span<const typename Ch::OutputSymbol> y_block) {
    if (static_cast<int>(y_block.size()) != cb.n)
        throw DomainError("induced_output_log_prob: block length mismatch");
    const std::int64_t m = cb.num_codewords();
    std::vector<double> terms(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        const auto cw = cb.codeword(i);
        double acc = 0.0;
        for (int j = 0; j < cb.n; ++j) acc += ch.kernel_log_prob(cw[j], y_block[j]);
        terms[static_cast<std::size_t>(i)] = acc;
    }
    return log_sum_exp(terms) - std::log(static_cast<double>(m));
}

enum class TvMethod { ExactEnumeration, MonteCarlo };

std::string to_string(TvMethod m);

// Variational distance report. tv follows the one-sided convention
// sup_A (P(A) - Q(A)); l1() exposes the full L1 distance (factor 2).
struct TVReport {
    double tv = 0.0;
    TvMethod method = TvMethod::ExactEnumeration;
    std::optional<double> std_error;
    std::optional<std::int64_t> samples;
    int n = 0;
    double rate = 0.0;
    std::uint64_t codebook_seed = 0;

    double l1() const { return 2.0 * tv; }
};

// Typical/atypical decomposition of the induced output measure at threshold
// i(x^n; y^n) <= n (I + epsilon); pairs with infinite density are atypical.
struct TypicalSplit {
    double epsilon = 0.0;
    double p2_mass = 0.0;         // atypical measure of the whole output space
    double typical_tv_part = 0.0; // E_Q (dP1/dQ - 1)^+
    TvMethod method = TvMethod::ExactEnumeration;
    std::optional<double> p2_std_error;
    std::optional<double> typical_std_error;
};

// ---------------------------------------------------------------------------
// Exact enumeration over |Y|^n output blocks (finite-output channels).
// ---------------------------------------------------------------------------

// Everything the enumeration pass can deliver in one sweep.
struct ExactTvAnalysis {
    double tv = 0.0;
    double half_l1 = 0.0;         // 0.5 * sum |p - q|, equals tv in exact arithmetic
    double typical_tv_part = 0.0; // only meaningful when split_requested
    double p2_mass = 0.0;
    bool split_requested = false;
};

namespace detail {

// Shared depth-first sweep over output blocks. Maintains per-codeword block
// kernel products and information-density sums; one leaf visit costs O(M).
template <FiniteOutputChannel Ch>
ExactTvAnalysis exact_sweep(const Ch& ch,
                            const Codebook<typename Ch::InputSymbol>& cb,
                            const DiscreteDistribution& qy,
                            std::optional<double> block_threshold,
                            std::int64_t enumeration_cap) {
    const int ny = ch.num_outputs();
    if (qy.size() != ny)
        throw DomainError("exact_sweep: target distribution size mismatch");
    const int n = cb.n;
    const auto m = static_cast<std::size_t>(cb.num_codewords());

    double blocks = 1.0;
    for (int j = 0; j < n; ++j) {
        blocks *= ny;
        if (blocks > static_cast<double>(enumeration_cap))
            throw EnumerationTooLargeError(
                "exact enumeration: |Y|^n exceeds the configured cap");
    }

    // Per (codeword, position, output) kernel tables.
    std::vector<double> kern(m * n * ny), log_kern(m * n * ny);
    for (std::size_t i = 0; i < m; ++i) {
        const auto cw = cb.codeword(static_cast<std::int64_t>(i));
        for (int j = 0; j < n; ++j)
            for (int y = 0; y < ny; ++y) {
                const double p = ch.kernel(cw[j], y);
                kern[(i * n + j) * ny + y] = p;
                log_kern[(i * n + j) * ny + y] = p > 0.0 ? std::log(p) : kNegInf;
            }
    }
    std::vector<double> log_qy(ny);
    for (int y = 0; y < ny; ++y) log_qy[y] = qy.log_prob(y);

    const bool split = block_threshold.has_value();
    const double thresh = block_threshold.value_or(0.0);

    // prod[d][i], isum[d][i]: partial products / density sums at depth d.
    std::vector<std::vector<double>> prod(n + 1, std::vector<double>(m));
    std::vector<std::vector<double>> isum;
    if (split) isum.assign(n + 1, std::vector<double>(m, 0.0));
    std::vector<double> qprod(n + 1, 1.0);
    for (std::size_t i = 0; i < m; ++i) prod[0][i] = 1.0;

    ExactTvAnalysis out;
    out.split_requested = split;
    const double inv_m = 1.0 / static_cast<double>(m);

    std::vector<int> ys(n, 0);
    int depth = 0;
    while (true) {
        if (depth == n) {
            double pbar = 0.0;
            for (std::size_t i = 0; i < m; ++i) pbar += prod[n][i];
            pbar *= inv_m;
            const double q = qprod[n];
            if (q == 0.0 && pbar > 0.0)
                throw DataError(
                    "exact enumeration: induced measure escapes the target support");
            const double diff = pbar - q;
            if (diff > 0.0) out.tv += diff;
            out.half_l1 += 0.5 * std::abs(diff);
            if (split) {
                double p1 = 0.0, p2 = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    // NaN (from +inf-inf letters) compares false: atypical,
                    // and such codewords carry zero product mass anyway.
                    if (isum[n][i] <= thresh) p1 += prod[n][i];
                    else p2 += prod[n][i];
                }
                p1 *= inv_m;
                p2 *= inv_m;
                out.p2_mass += p2;
                const double tdiff = p1 - q;
                if (tdiff > 0.0) out.typical_tv_part += tdiff;
            }
            // Step to the next block.
            --depth;
            while (depth >= 0 && ys[depth] == ny - 1) --depth;
            if (depth < 0) break;
            ++ys[depth];
        } else {
            const int y = ys[depth];
            const std::size_t base = static_cast<std::size_t>(depth) * ny + y;
            for (std::size_t i = 0; i < m; ++i)
                prod[depth + 1][i] = prod[depth][i] * kern[i * n * ny + base];
            if (split) {
                const double lq = log_qy[y];
                for (std::size_t i = 0; i < m; ++i)
                    isum[depth + 1][i] =
                        isum[depth][i] + (log_kern[i * n * ny + base] - lq);
            }
            qprod[depth + 1] = qprod[depth] * qy.prob(y);
            ++depth;
            if (depth < n) ys[depth] = 0;
        }
    }
    return out;
}

} // namespace detail

// Exact one-sided variational distance by enumerating all output blocks.
template <FiniteOutputChannel Ch>
TVReport tv_exact(const Ch& ch, const Codebook<typename Ch::InputSymbol>& cb,
                  const DiscreteDistribution& qy,
                  std::int64_t enumeration_cap = kDefaultEnumerationCap) {
    const auto a = detail::exact_sweep(ch, cb, qy, std::nullopt, enumeration_cap);
    TVReport r;
    r.tv = a.tv;
    r.method = TvMethod::ExactEnumeration;
    r.n = cb.n;
    r.rate = cb.rate;
    r.codebook_seed = cb.seed;
    return r;
}

// Exact TV together with the half-L1 cross-check.
template <FiniteOutputChannel Ch>
ExactTvAnalysis tv_exact_analysis(const Ch& ch,
                                  const Codebook<typename Ch::InputSymbol>& cb,
                                  const DiscreteDistribution& qy,
                                  std::int64_t enumeration_cap = kDefaultEnumerationCap) {
    return detail::exact_sweep(ch, cb, qy, std::nullopt, enumeration_cap);
}

// Exact TV and split in a single enumeration pass.
template <FiniteOutputChannel Ch>
ExactTvAnalysis tv_exact_with_split(const Ch& ch,
                                    const Codebook<typename Ch::InputSymbol>& cb,
                                    const DiscreteDistribution& qy, double mi,
                                    double epsilon,
                                    std::int64_t enumeration_cap = kDefaultEnumerationCap) {
    return detail::exact_sweep(ch, cb, qy, cb.n * (mi + epsilon), enumeration_cap);
}

// Exact typical/atypical split at threshold n (mi + epsilon).
template <FiniteOutputChannel Ch>
TypicalSplit typical_split_exact(const Ch& ch,
                                 const Codebook<typename Ch::InputSymbol>& cb,
                                 const DiscreteDistribution& qy, double mi,
                                 double epsilon,
                                 std::int64_t enumeration_cap = kDefaultEnumerationCap) {
    const double thresh = cb.n * (mi + epsilon);
    const auto a = detail::exact_sweep(ch, cb, qy, thresh, enumeration_cap);
    TypicalSplit s;
    s.epsilon = epsilon;
    s.p2_mass = a.p2_mass;
    s.typical_tv_part = a.typical_tv_part;
    s.method = TvMethod::ExactEnumeration;
    return s;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimators (any channel with a samplable target).
// ---------------------------------------------------------------------------

// Unbiased estimate of E_Q [(dP/dQ - 1)^+] from blocks drawn i.i.d. per
// symbol from qy. Ratios are formed in log space; a non-finite ratio aborts.
template <ChannelModel Ch, typename Qy>
    requires Density<Qy, typename Ch::OutputSymbol>
TVReport tv_monte_carlo(const Ch& ch, const Codebook<typename Ch::InputSymbol>& cb,
                        const Qy& qy, std::int64_t num_samples,
                        std::uint64_t seed) {
    if (num_samples < 1) throw DomainError("tv_monte_carlo: need >= 1 sample");
    Rng rng(seed);
    const std::int64_t m = cb.num_codewords();
    std::vector<double> block_logs(static_cast<std::size_t>(m));
    std::vector<typename Ch::OutputSymbol> y(static_cast<std::size_t>(cb.n));
    const double log_m = std::log(static_cast<double>(m));
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t s = 0; s < num_samples; ++s) {
        double q_log = 0.0;
        for (int j = 0; j < cb.n; ++j) {
            y[static_cast<std::size_t>(j)] = qy.sample(rng);
            q_log += qy.log_prob(y[static_cast<std::size_t>(j)]);
        }
        for (std::int64_t i = 0; i < m; ++i) {
            const auto cw = cb.codeword(i);
            double acc = 0.0;
            for (int j = 0; j < cb.n; ++j)
                acc += ch.kernel_log_prob(cw[j], y[static_cast<std::size_t>(j)]);
            block_logs[static_cast<std::size_t>(i)] = acc;
        }
        const double lr = log_sum_exp(block_logs) - log_m - q_log;
        if (std::isnan(lr))
            throw EstimationError("tv_monte_carlo: NaN density ratio");
        double v = 0.0;
        if (lr > 0.0) {
            v = std::expm1(lr);
            if (!std::isfinite(v))
                throw EstimationError("tv_monte_carlo: density ratio overflow");
        }
        sum += v;
        sumsq += v * v;
    }
    TVReport r;
    const double cnt = static_cast<double>(num_samples);
    r.tv = sum / cnt;
    r.method = TvMethod::MonteCarlo;
    r.std_error = std::sqrt(std::max(0.0, sumsq / cnt - r.tv * r.tv) / cnt);
    r.samples = num_samples;
    r.n = cb.n;
    r.rate = cb.rate;
    r.codebook_seed = cb.seed;
    return r;
}

// Monte Carlo split: p2 mass from (uniform codeword, kernel) draws, typical
// part from target draws; both at threshold n (mi + epsilon).
template <ChannelModel Ch, typename Qy>
    requires Density<Qy, typename Ch::OutputSymbol>
TypicalSplit typical_split_mc(const Ch& ch,
                              const Codebook<typename Ch::InputSymbol>& cb,
                              const Qy& qy, double mi, double epsilon,
                              std::int64_t num_samples, std::uint64_t seed) {
    if (num_samples < 1) throw DomainError("typical_split_mc: need >= 1 sample");
    const double thresh = cb.n * (mi + epsilon);
    const std::int64_t m = cb.num_codewords();
    TypicalSplit out;
    out.epsilon = epsilon;
    out.method = TvMethod::MonteCarlo;

    { // atypical mass under the induced joint draw
        Rng rng(derive_seed(seed, "split-p2", 0));
        std::int64_t hits = 0;
        std::vector<typename Ch::OutputSymbol> y(static_cast<std::size_t>(cb.n));
        for (std::int64_t s = 0; s < num_samples; ++s) {
            const std::int64_t pick =
                static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(m));
            const auto cw = cb.codeword(pick < m ? pick : m - 1);
            double isum = 0.0;
            bool atypical = false;
            for (int j = 0; j < cb.n && !atypical; ++j) {
                const auto yj = ch.sample_output(cw[j], rng);
                const double v = information_density(ch, qy, cw[j], yj);
                if (v == kPosInf) atypical = true;
                else isum += v;
            }
            if (atypical || isum > thresh) ++hits;
        }
        const double cnt = static_cast<double>(num_samples);
        out.p2_mass = static_cast<double>(hits) / cnt;
        out.p2_std_error =
            std::sqrt(out.p2_mass * (1.0 - out.p2_mass) / cnt);
    }
    { // typical part under the target product draw
        Rng rng(derive_seed(seed, "split-typ", 0));
        std::vector<typename Ch::OutputSymbol> y(static_cast<std::size_t>(cb.n));
        double sum = 0.0, sumsq = 0.0;
        const double log_m = std::log(static_cast<double>(m));
        std::vector<double> logs(static_cast<std::size_t>(m));
        for (std::int64_t s = 0; s < num_samples; ++s) {
            double q_log = 0.0;
            for (int j = 0; j < cb.n; ++j) {
                y[static_cast<std::size_t>(j)] = qy.sample(rng);
                q_log += qy.log_prob(y[static_cast<std::size_t>(j)]);
            }
            for (std::int64_t i = 0; i < m; ++i) {
                const auto cw = cb.codeword(i);
                double acc = 0.0;
                for (int j = 0; j < cb.n; ++j)
                    acc += ch.kernel_log_prob(cw[j], y[static_cast<std::size_t>(j)]);
                logs[static_cast<std::size_t>(i)] = acc;
            }
            // restrict the mixture to typical codewords
            double lse = kNegInf;
            for (std::int64_t i = 0; i < m; ++i) {
                const double isum = logs[static_cast<std::size_t>(i)] - q_log;
                if (isum <= thresh) lse = log_sum_exp(lse, logs[static_cast<std::size_t>(i)]);
            }
            double v = 0.0;
            if (lse != kNegInf) {
                const double lr = lse - log_m - q_log;
                if (lr > 0.0) v = std::expm1(lr);
            }
            sum += v;
            sumsq += v * v;
        }
        const double cnt = static_cast<double>(num_samples);
        out.typical_tv_part = sum / cnt;
        out.typical_std_error = std::sqrt(
            std::max(0.0, sumsq / cnt - out.typical_tv_part * out.typical_tv_part) / cnt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact tail computations for finite channels.
// ---------------------------------------------------------------------------

// P( sum_j i(X_j;Y_j) > n (I + epsilon) ) under the i.i.d. joint law, by
// n-fold convolution of the per-letter information-density distribution.
double atypical_mass_expectation(const FiniteChannel& ch,
                                 const DiscreteDistribution& qx, int n,
                                 double epsilon);

// Monte Carlo counterpart (usable for continuous channels).
template <ChannelModel Ch, typename Qx, typename Qy>
    requires Density<Qx, typename Ch::InputSymbol> &&
             Density<Qy, typename Ch::OutputSymbol>
McEstimate atypical_mass_expectation_mc(const Ch& ch, const Qx& qx, const Qy& qy,
                                        double mi, int n, double epsilon,
                                        std::int64_t num_samples,
                                        std::uint64_t seed) {
    Rng rng(seed);
    const double thresh = n * (mi + epsilon);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < num_samples; ++s) {
        double isum = 0.0;
        bool atypical = false;
        for (int j = 0; j < n && !atypical; ++j) {
            const auto x = qx.sample(rng);
            const auto y = ch.sample_output(x, rng);
            const double v = information_density(ch, qy, x, y);
            if (v == kPosInf) atypical = true;
            else isum += v;
        }
        if (atypical || isum > thresh) ++hits;
    }
    McEstimate e;
    const double cnt = static_cast<double>(num_samples);
    e.value = static_cast<double>(hits) / cnt;
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / cnt);
    e.samples = num_samples;
    return e;
}

// Per-codebook atypical mass, exact: for each codeword, an n-step convolution
// of the row-conditional density distribution; averaged over codewords.
double p2_mass_exact(const FiniteChannel& ch, const Codebook<int>& cb,
                     const DiscreteDistribution& qy, double mi, double epsilon);

// Induced output pmf over all |Y|^n blocks (test-scale sizes only), and the
// same decomposed into typical and atypical parts.
std::vector<double> induced_output_pmf(const FiniteChannel& ch,
                                       const Codebook<int>& cb,
                                       std::int64_t enumeration_cap = kDefaultEnumerationCap);
struct SplitPmfs {
    std::vector<double> p1;
    std::vector<double> p2;
};
SplitPmfs split_pmfs(const FiniteChannel& ch, const Codebook<int>& cb,
                     const DiscreteDistribution& qy, double mi, double epsilon,
                     std::int64_t enumeration_cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Serialization for reproducibility audits.
// ---------------------------------------------------------------------------
void save_codebook(const std::string& path, const Codebook<int>& cb);
void save_codebook(const std::string& path, const Codebook<double>& cb);
Codebook<int> load_codebook_finite(const std::string& path);
Codebook<double> load_codebook_real(const std::string& path);

} // namespace resolv

#endif
