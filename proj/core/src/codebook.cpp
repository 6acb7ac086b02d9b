#include "resolv/codebook.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace resolv {

std::int64_t codebook_size(int n, double rate, std::int64_t max_codewords) {
    if (n < 1) throw DomainError("codebook_size: block length must be >= 1");
    if (!(rate >= 0.0)) throw DomainError("codebook_size: rate must be >= 0");
    const double t = std::exp(static_cast<double>(n) * rate);
    double m;
    const double r = std::round(t);
    if (std::abs(t - r) <= 1e-9 * std::max(1.0, r)) m = r;
    else m = std::floor(t);
    if (m < 1.0) m = 1.0;
    if (!(m <= static_cast<double>(max_codewords)))
        throw SizeError("codebook_size: exp(nR) exceeds the codebook cap");
    return static_cast<std::int64_t>(m);
}

std::string to_string(TvMethod m) {
    switch (m) {
        case TvMethod::ExactEnumeration: return "exact-enumeration";
        case TvMethod::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

namespace {

struct Atom {
    double value;
    double weight;
};

// Sort by value and coalesce entries that are equal up to rounding noise.
void merge_atoms(std::vector<Atom>& atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (w > 0 && std::abs(atoms[i].value - atoms[w - 1].value) <=
                         1e-12 * (1.0 + std::abs(atoms[i].value))) {
            atoms[w - 1].weight += atoms[i].weight;
        } else {
            atoms[w++] = atoms[i];
        }
    }
    atoms.resize(w);
}

std::vector<Atom> convolve(const std::vector<Atom>& dist,
                           const std::vector<Atom>& letter) {
    std::vector<Atom> next;
    next.reserve(dist.size() * letter.size());
    for (const Atom& a : dist)
        for (const Atom& b : letter)
            next.push_back({a.value + b.value, a.weight * b.weight});
    merge_atoms(next);
    return next;
}

double tail_above(const std::vector<Atom>& dist, double threshold) {
    double mass = 0.0;
    for (const Atom& a : dist)
        if (a.value > threshold) mass += a.weight;
    return mass;
}

} // namespace

double atypical_mass_expectation(const FiniteChannel& ch,
                                 const DiscreteDistribution& qx, int n,
                                 double epsilon) {
    if (n < 1) throw DomainError("atypical_mass_expectation: n must be >= 1");
    const double mi = mutual_information(ch, qx);
    const DiscreteDistribution qy = output_distribution(ch, qx);

    std::vector<Atom> letter;
    for (int x = 0; x < ch.num_inputs(); ++x) {
        const double wx = qx.prob(x);
        if (wx == 0.0) continue;
        for (int y = 0; y < ch.num_outputs(); ++y) {
            const double w = wx * ch.kernel(x, y);
            if (w == 0.0) continue;
            const double v = ch.kernel_log_prob(x, y) - qy.log_prob(y);
            if (!std::isfinite(v))
                throw DataError(
                    "atypical_mass_expectation: infinite per-letter density");
            letter.push_back({v, w});
        }
    }
    merge_atoms(letter);

    std::vector<Atom> dist = letter;
    for (int j = 1; j < n; ++j) dist = convolve(dist, letter);
    return tail_above(dist, n * (mi + epsilon));
}

double p2_mass_exact(const FiniteChannel& ch, const Codebook<int>& cb,
                     const DiscreteDistribution& qy, double mi, double epsilon) {
    const double thresh = cb.n * (mi + epsilon);
    // Row-conditional per-letter distributions, one per input symbol.
    std::vector<std::vector<Atom>> row_atoms(static_cast<std::size_t>(ch.num_inputs()));
    for (int x = 0; x < ch.num_inputs(); ++x) {
        for (int y = 0; y < ch.num_outputs(); ++y) {
            const double w = ch.kernel(x, y);
            if (w == 0.0) continue;
            const double v = ch.kernel_log_prob(x, y) - qy.log_prob(y);
            if (!std::isfinite(v))
                throw DataError("p2_mass_exact: infinite per-letter density");
            row_atoms[static_cast<std::size_t>(x)].push_back({v, w});
        }
        merge_atoms(row_atoms[static_cast<std::size_t>(x)]);
    }
    const std::int64_t m = cb.num_codewords();
    double acc = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        const auto cw = cb.codeword(i);
        std::vector<Atom> dist{{0.0, 1.0}};
        for (int j = 0; j < cb.n; ++j)
            dist = convolve(dist, row_atoms[static_cast<std::size_t>(cw[j])]);
        acc += tail_above(dist, thresh);
    }
    return acc / static_cast<double>(m);
}

namespace {

std::int64_t checked_block_count(int ny, int n, std::int64_t cap) {
    std::int64_t blocks = 1;
    for (int j = 0; j < n; ++j) {
        if (blocks > cap / ny)
            throw EnumerationTooLargeError(
                "enumeration: |Y|^n exceeds the configured cap");
        blocks *= ny;
    }
    if (blocks > cap)
        throw EnumerationTooLargeError("enumeration: |Y|^n exceeds the configured cap");
    return blocks;
}

// Visit every output block in lexicographic order.
// f(index, y_block) with y_block a span of n output symbols.
template <typename F>
void for_each_block(int ny, int n, std::int64_t blocks, F&& f) {
    std::vector<int> ys(static_cast<std::size_t>(n), 0);
    for (std::int64_t idx = 0; idx < blocks; ++idx) {
        f(idx, std::span<const int>(ys));
        for (int j = n - 1; j >= 0; --j) {
            if (++ys[static_cast<std::size_t>(j)] < ny) break;
            ys[static_cast<std::size_t>(j)] = 0;
        }
    }
}

} // namespace

std::vector<double> induced_output_pmf(const FiniteChannel& ch,
                                       const Codebook<int>& cb,
                                       std::int64_t enumeration_cap) {
    const std::int64_t blocks =
        checked_block_count(ch.num_outputs(), cb.n, enumeration_cap);
    const std::int64_t m = cb.num_codewords();
    std::vector<double> pmf(static_cast<std::size_t>(blocks), 0.0);
    for_each_block(ch.num_outputs(), cb.n, blocks,
                   [&](std::int64_t idx, std::span<const int> ys) {
                       double acc = 0.0;
                       for (std::int64_t i = 0; i < m; ++i) {
                           const auto cw = cb.codeword(i);
                           double p = 1.0;
                           for (int j = 0; j < cb.n; ++j)
                               p *= ch.kernel(cw[j], ys[static_cast<std::size_t>(j)]);
                           acc += p;
                       }
                       pmf[static_cast<std::size_t>(idx)] =
                           acc / static_cast<double>(m);
                   });
    return pmf;
}

SplitPmfs split_pmfs(const FiniteChannel& ch, const Codebook<int>& cb,
                     const DiscreteDistribution& qy, double mi, double epsilon,
                     std::int64_t enumeration_cap) {
    const std::int64_t blocks =
        checked_block_count(ch.num_outputs(), cb.n, enumeration_cap);
    const std::int64_t m = cb.num_codewords();
    const double thresh = cb.n * (mi + epsilon);
    SplitPmfs out;
    out.p1.assign(static_cast<std::size_t>(blocks), 0.0);
    out.p2.assign(static_cast<std::size_t>(blocks), 0.0);
    for_each_block(
        ch.num_outputs(), cb.n, blocks,
        [&](std::int64_t idx, std::span<const int> ys) {
            double p1 = 0.0, p2 = 0.0;
            for (std::int64_t i = 0; i < m; ++i) {
                const auto cw = cb.codeword(i);
                double p = 1.0;
                double isum = 0.0;
                for (int j = 0; j < cb.n; ++j) {
                    const int y = ys[static_cast<std::size_t>(j)];
                    p *= ch.kernel(cw[j], y);
                    isum += ch.kernel_log_prob(cw[j], y) - qy.log_prob(y);
                }
                if (isum <= thresh) p1 += p; // NaN/inf sums land atypical
                else p2 += p;
            }
            out.p1[static_cast<std::size_t>(idx)] = p1 / static_cast<double>(m);
            out.p2[static_cast<std::size_t>(idx)] = p2 / static_cast<double>(m);
        });
    return out;
}

namespace {

template <typename Sym>
void write_codebook(const std::string& path, const Codebook<Sym>& cb,
                    const char* kind, const char* fmt) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("save_codebook: cannot open " + path);
    std::fprintf(f, "n,%d\nrate,%.17g\nM,%" PRId64 "\nalphabet,%s\nseed,%" PRIu64 "\n",
                 cb.n, cb.rate, cb.num_codewords(), kind, cb.seed);
    for (std::int64_t i = 0; i < cb.num_codewords(); ++i) {
        const auto cw = cb.codeword(i);
        for (int j = 0; j < cb.n; ++j) {
            if (j) std::fputc(',', f);
            std::fprintf(f, fmt, cw[j]);
        }
        std::fputc('\n', f);
    }
    std::fclose(f);
}

void parse_header_line(std::istream& in, const char* key, std::string& value) {
    std::string line;
    if (!std::getline(in, line)) throw Error("load_codebook: truncated header");
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.substr(0, comma) != key)
        throw Error(std::string("load_codebook: expected header field ") + key);
    value = line.substr(comma + 1);
}

} // namespace

void save_codebook(const std::string& path, const Codebook<int>& cb) {
    write_codebook(path, cb, "finite", "%d");
}

void save_codebook(const std::string& path, const Codebook<double>& cb) {
    write_codebook(path, cb, "real", "%.17g");
}

namespace {

template <typename Sym, typename Parse>
Codebook<Sym> read_codebook(const std::string& path, const char* kind,
                            Parse&& parse) {
    std::ifstream in(path);
    if (!in) throw Error("load_codebook: cannot open " + path);
    std::string v;
    Codebook<Sym> cb;
    parse_header_line(in, "n", v);
    cb.n = std::stoi(v);
    parse_header_line(in, "rate", v);
    cb.rate = std::stod(v);
    parse_header_line(in, "M", v);
    const std::int64_t m = std::stoll(v);
    parse_header_line(in, "alphabet", v);
    if (v != kind) throw Error("load_codebook: alphabet kind mismatch");
    parse_header_line(in, "seed", v);
    cb.seed = std::stoull(v);
    cb.symbols.reserve(static_cast<std::size_t>(m) * cb.n);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cb.symbols.push_back(parse(cell));
    }
    if (cb.num_codewords() != m)
        throw Error("load_codebook: row count does not match header");
    return cb;
}

} // namespace

Codebook<int> load_codebook_finite(const std::string& path) {
    return read_codebook<int>(path, "finite",
                              [](const std::string& s) { return std::stoi(s); });
}

Codebook<double> load_codebook_real(const std::string& path) {
    return read_codebook<double>(path, "real",
                                 [](const std::string& s) { return std::stod(s); });
}

} // namespace resolv
