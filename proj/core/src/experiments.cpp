#include "resolv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "resolv/bounds.hpp"
#include "resolv/channel.hpp"
#include "resolv/codebook.hpp"
#include "resolv/converse.hpp"
#include "resolv/errors.hpp"
#include "resolv/info_measures.hpp"

namespace resolv {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, bool timing) {
    if (!timing) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

FiniteChannel build_finite_channel(const ChannelSpec& spec) {
    switch (spec.kind) {
        case ChannelSpec::Kind::Bsc:
            return FiniteChannel::bsc(spec.bsc_crossover);
        case ChannelSpec::Kind::Identity:
            return FiniteChannel::identity(spec.identity_size);
        case ChannelSpec::Kind::Dmc:
            return FiniteChannel::from_rows(spec.dmc_rows);
        default:
            throw ConfigError("this experiment requires a finite channel");
    }
}

DiscreteDistribution build_finite_input(const InputSpec& spec, int num_inputs) {
    switch (spec.kind) {
        case InputSpec::Kind::Uniform:
            return DiscreteDistribution::uniform(num_inputs);
        case InputSpec::Kind::Pmf: {
            if (static_cast<int>(spec.pmf.size()) != num_inputs)
                throw ConfigError("input_pmf size does not match the input alphabet");
            return DiscreteDistribution(spec.pmf);
        }
        default:
            throw ConfigError("finite channels require a uniform or pmf input");
    }
}

std::uint64_t row_seed(const ExperimentConfig& cfg, const std::string& purpose,
                       int n, double rate, std::int64_t index) {
    const std::string tag = cfg.experiment_id + "/" + purpose + "/n=" +
                            std::to_string(n) + "/R=" + format_double(rate);
    return derive_seed(cfg.master_seed, tag, static_cast<std::uint64_t>(index));
}

Cell opt_cell(std::optional<double> v) {
    if (!v) return std::monostate{};
    return *v;
}

} // namespace

// ---------------------------------------------------------------------------
// Table rendering.
// ---------------------------------------------------------------------------

std::string format_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else return std::to_string(v);
        },
        c);
}

void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) os << ',';
        os << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw Error("write_csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_cell(row[i]);
        }
        os << '\n';
    }
}

void write_json(const Table& t, std::ostream& os) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw Error("write_json: row width does not match header");
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& col = t.columns[i];
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>)
                        obj[col] = nullptr;
                    else
                        obj[col] = v;
                },
                row[i]);
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
}

std::string render_table(const Table& t, OutputFormat format) {
    std::ostringstream ss;
    if (format == OutputFormat::Csv) write_csv(t, ss);
    else write_json(t, ss);
    return ss.str();
}

Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (header) {
            t.columns = cells;
            header = false;
        } else {
            std::vector<Cell> row;
            row.reserve(cells.size());
            // pad short rows (trailing empty cells are dropped by getline)
            while (cells.size() < t.columns.size()) cells.push_back("");
            for (auto& c : cells) row.emplace_back(std::move(c));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

void emit(const Table& t, OutputFormat format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("emit: cannot open output file: " + path);
    os << render_table(t, format);
    if (!os) throw Error("emit: write failed: " + path);
}

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    const int workers = static_cast<int>(
        std::min<std::int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// tv-sweep
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kSweepColumns = {
    "experiment_id", "channel", "n",       "R_nats",  "M",       "codebook_seed",
    "tv",            "tv_stderr", "method", "p2_mass", "epsilon", "wall_ms",
};

struct SweepCell {
    std::uint64_t seed = 0;
    double tv = 0.0;
    std::optional<double> tv_stderr;
    std::optional<double> p2;
    std::string method;
    double wall_ms = 0.0;
};

template <typename MakeRow>
void append_sweep_rows(Table& table, const std::vector<SweepCell>& cells,
                       MakeRow&& base) {
    double mean_tv = 0.0, max_tv = 0.0, mean_p2 = 0.0;
    bool have_p2 = true;
    for (const auto& c : cells) {
        mean_tv += c.tv;
        max_tv = std::max(max_tv, c.tv);
        if (c.p2) mean_p2 += *c.p2;
        else have_p2 = false;
    }
    mean_tv /= static_cast<double>(cells.size());
    mean_p2 /= static_cast<double>(cells.size());
    for (const auto& c : cells) {
        auto row = base();
        row[5] = Cell{std::uint64_t{c.seed}};
        row[6] = Cell{c.tv};
        row[7] = opt_cell(c.tv_stderr);
        row[8] = Cell{c.method};
        row[9] = opt_cell(c.p2);
        row[11] = Cell{c.wall_ms};
        table.rows.push_back(std::move(row));
    }
    {
        auto row = base();
        row[6] = Cell{mean_tv};
        row[8] = Cell{std::string("summary-mean")};
        if (have_p2) row[9] = Cell{mean_p2};
        table.rows.push_back(std::move(row));
    }
    {
        auto row = base();
        row[6] = Cell{max_tv};
        row[8] = Cell{std::string("summary-max")};
        table.rows.push_back(std::move(row));
    }
}

ExperimentResult run_tv_sweep_finite(const ExperimentConfig& cfg) {
    const FiniteChannel ch = build_finite_channel(cfg.channel);
    const DiscreteDistribution qx = build_finite_input(cfg.input, ch.num_inputs());
    const DiscreteDistribution qy = output_distribution(ch, qx);
    const double mi = mutual_information(ch, qx);

    ExperimentResult out;
    out.table.columns = kSweepColumns;
    for (const int n : cfg.n_list) {
        for (const double rate : cfg.rate_list) {
            ++out.status.evaluation_points;
            const std::int64_t m = codebook_size(n, rate, cfg.max_codebook_size);
            bool exact = true;
            {
                double blocks = 1.0;
                for (int j = 0; j < n; ++j) blocks *= ch.num_outputs();
                exact = blocks <= static_cast<double>(cfg.enumeration_cap);
            }
            std::vector<SweepCell> cells(
                static_cast<std::size_t>(cfg.num_codebooks));
            parallel_for(cfg.num_codebooks, cfg.threads, [&](std::int64_t b) {
                const auto start = Clock::now();
                SweepCell& cell = cells[static_cast<std::size_t>(b)];
                cell.seed = row_seed(cfg, "cb", n, rate, b);
                const auto cb =
                    draw_codebook(qx, n, rate, cell.seed, cfg.max_codebook_size);
                if (exact) {
                    cell.method = to_string(TvMethod::ExactEnumeration);
                    if (cfg.epsilon) {
                        const auto a = tv_exact_with_split(ch, cb, qy, mi,
                                                           *cfg.epsilon,
                                                           cfg.enumeration_cap);
                        cell.tv = a.tv;
                        cell.p2 = a.p2_mass;
                    } else {
                        cell.tv = tv_exact(ch, cb, qy, cfg.enumeration_cap).tv;
                    }
                } else {
                    cell.method = to_string(TvMethod::MonteCarlo);
                    const auto r = tv_monte_carlo(
                        ch, cb, qy, cfg.num_mc_samples,
                        row_seed(cfg, "tv-mc", n, rate, b));
                    cell.tv = r.tv;
                    cell.tv_stderr = r.std_error;
                    if (cfg.epsilon) {
                        const auto s = typical_split_mc(
                            ch, cb, qy, mi, *cfg.epsilon, cfg.num_mc_samples,
                            row_seed(cfg, "split-mc", n, rate, b));
                        cell.p2 = s.p2_mass;
                    }
                }
                cell.wall_ms = elapsed_ms(start, cfg.timing);
            });
            append_sweep_rows(out.table, cells, [&]() {
                std::vector<Cell> row(kSweepColumns.size(), Cell{std::monostate{}});
                row[0] = Cell{cfg.experiment_id};
                row[1] = Cell{cfg.channel.label};
                row[2] = Cell{std::int64_t{n}};
                row[3] = Cell{rate};
                row[4] = Cell{std::int64_t{m}};
                row[10] = opt_cell(cfg.epsilon);
                row[11] = Cell{0.0};
                return row;
            });
        }
    }
    return out;
}

template <ChannelModel Ch, typename Qy>
ExperimentResult run_tv_sweep_mc(const ExperimentConfig& cfg, const Ch& ch,
                                 const GaussianDistribution& qx, const Qy& qy,
                                 std::optional<double> mi) {
    ExperimentResult out;
    out.table.columns = kSweepColumns;
    for (const int n : cfg.n_list) {
        for (const double rate : cfg.rate_list) {
            ++out.status.evaluation_points;
            const std::int64_t m = codebook_size(n, rate, cfg.max_codebook_size);
            std::vector<SweepCell> cells(
                static_cast<std::size_t>(cfg.num_codebooks));
            parallel_for(cfg.num_codebooks, cfg.threads, [&](std::int64_t b) {
                const auto start = Clock::now();
                SweepCell& cell = cells[static_cast<std::size_t>(b)];
                cell.seed = row_seed(cfg, "cb", n, rate, b);
                const auto cb =
                    draw_codebook(qx, n, rate, cell.seed, cfg.max_codebook_size);
                cell.method = to_string(TvMethod::MonteCarlo);
                const auto r = tv_monte_carlo(ch, cb, qy, cfg.num_mc_samples,
                                              row_seed(cfg, "tv-mc", n, rate, b));
                cell.tv = r.tv;
                cell.tv_stderr = r.std_error;
                if (cfg.epsilon && mi) {
                    const auto s = typical_split_mc(
                        ch, cb, qy, *mi, *cfg.epsilon, cfg.num_mc_samples,
                        row_seed(cfg, "split-mc", n, rate, b));
                    cell.p2 = s.p2_mass;
                }
                cell.wall_ms = elapsed_ms(start, cfg.timing);
            });
            append_sweep_rows(out.table, cells, [&]() {
                std::vector<Cell> row(kSweepColumns.size(), Cell{std::monostate{}});
                row[0] = Cell{cfg.experiment_id};
                row[1] = Cell{cfg.channel.label};
                row[2] = Cell{std::int64_t{n}};
                row[3] = Cell{rate};
                row[4] = Cell{std::int64_t{m}};
                row[10] = opt_cell(cfg.epsilon);
                row[11] = Cell{0.0};
                return row;
            });
        }
    }
    return out;
}

} // namespace

ExperimentResult run_tv_sweep(const ExperimentConfig& cfg) {
    if (cfg.channel.is_finite()) return run_tv_sweep_finite(cfg);
    if (cfg.channel.kind == ChannelSpec::Kind::Awgn) {
        const AwgnChannel ch(cfg.channel.awgn_noise_variance);
        const GaussianDistribution qx(0.0, cfg.input.power);
        const GaussianDistribution qy = output_distribution(ch, qx);
        return run_tv_sweep_mc(cfg, ch, qx, qy, mutual_information(ch, qx));
    }
    const RayleighChannel ch(cfg.channel.rayleigh_fading_power,
                             cfg.channel.rayleigh_noise_variance);
    const GaussianDistribution qx(0.0, cfg.input.power);
    const FadedGaussianMixture qy = output_distribution(ch, qx);
    return run_tv_sweep_mc(cfg, ch, qx, qy, std::nullopt);
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kConcentrationColumns = {
    "experiment_id", "channel", "n", "R_nats", "M", "codebook_seed",
    "tv", "method", "threshold", "tv_exceeds",
    "p2_mass", "mu", "delta", "p2_exceeds", "hypothesis_met",
    "epsilon", "alpha", "beta1", "beta2", "gamma1", "gamma2", "n_min",
    "tv_exceed_freq", "first_order_rhs", "binom_slack",
    "p2_exceed_freq", "atypical_tail_bound", "atypical_bound_slack",
    "mean_tv", "wall_ms",
};

} // namespace

ExperimentResult run_concentration(const ExperimentConfig& cfg) {
    const FiniteChannel ch = build_finite_channel(cfg.channel);
    const DiscreteDistribution qx = build_finite_input(cfg.input, ch.num_inputs());
    const DiscreteDistribution qy = output_distribution(ch, qx);
    const InfoStats stats = compute_info_stats(ch, qx);

    ExperimentResult out;
    out.table.columns = kConcentrationColumns;

    for (const double rate : cfg.rate_list) {
        const FirstOrderParams params =
            select_first_order_params(stats.mutual_information, stats.renyi_grid, rate);
        for (const int n : cfg.n_list) {
            ++out.status.evaluation_points;
            // Rows below n_min are flagged but still fully evaluated, so they
            // do not count toward the hypothesis-only exit status.
            const bool hypothesis_met = n >= params.n_min;
            const std::int64_t m = codebook_size(n, rate, cfg.max_codebook_size);
            const double threshold = first_order_threshold(params.gamma1, n);
            const double rhs = first_order_rhs(params.gamma2, n);
            const double mu =
                atypical_mass_expectation(ch, qx, n, params.epsilon);
            bool exact = true;
            {
                double blocks = 1.0;
                for (int j = 0; j < n; ++j) blocks *= ch.num_outputs();
                exact = blocks <= static_cast<double>(cfg.enumeration_cap);
            }

            struct BookCell {
                std::uint64_t seed = 0;
                double tv = 0.0;
                double p2 = 0.0;
                std::string method;
                double wall_ms = 0.0;
            };
            std::vector<BookCell> cells(static_cast<std::size_t>(cfg.num_codebooks));
            parallel_for(cfg.num_codebooks, cfg.threads, [&](std::int64_t b) {
                const auto start = Clock::now();
                BookCell& cell = cells[static_cast<std::size_t>(b)];
                cell.seed = row_seed(cfg, "cb", n, rate, b);
                const auto cb =
                    draw_codebook(qx, n, rate, cell.seed, cfg.max_codebook_size);
                if (exact) {
                    cell.method = to_string(TvMethod::ExactEnumeration);
                    cell.tv = tv_exact(ch, cb, qy, cfg.enumeration_cap).tv;
                } else {
                    cell.method = to_string(TvMethod::MonteCarlo);
                    cell.tv = tv_monte_carlo(ch, cb, qy, cfg.num_mc_samples,
                                             row_seed(cfg, "tv-mc", n, rate, b))
                                  .tv;
                }
                cell.p2 = p2_mass_exact(ch, cb, qy, stats.mutual_information,
                                        params.epsilon);
                cell.wall_ms = elapsed_ms(start, cfg.timing);
            });

            std::int64_t tv_exceed = 0, p2_exceed = 0;
            double mean_tv = 0.0;
            for (const auto& c : cells) {
                if (c.tv > threshold) ++tv_exceed;
                if (c.p2 > mu * (1.0 + cfg.delta)) ++p2_exceed;
                mean_tv += c.tv;
            }
            mean_tv /= static_cast<double>(cells.size());

            auto make_base = [&]() {
                std::vector<Cell> row(kConcentrationColumns.size(),
                                      Cell{std::monostate{}});
                row[0] = Cell{cfg.experiment_id};
                row[1] = Cell{cfg.channel.label};
                row[2] = Cell{std::int64_t{n}};
                row[3] = Cell{rate};
                row[4] = Cell{std::int64_t{m}};
                row[8] = Cell{threshold};
                row[11] = Cell{mu};
                row[12] = Cell{cfg.delta};
                row[14] = Cell{hypothesis_met};
                row[15] = Cell{params.epsilon};
                row[16] = Cell{params.alpha};
                row[17] = Cell{params.beta1};
                row[18] = Cell{params.beta2};
                row[19] = Cell{params.gamma1};
                row[20] = Cell{params.gamma2};
                row[21] = Cell{std::int64_t{params.n_min}};
                row[29] = Cell{0.0};
                return row;
            };
            for (const auto& c : cells) {
                auto row = make_base();
                row[5] = Cell{std::uint64_t{c.seed}};
                row[6] = Cell{c.tv};
                row[7] = Cell{c.method};
                row[9] = Cell{c.tv > threshold};
                row[10] = Cell{c.p2};
                row[13] = Cell{c.p2 > mu * (1.0 + cfg.delta)};
                row[29] = Cell{c.wall_ms};
                out.table.rows.push_back(std::move(row));
            }
            {
                const double books = static_cast<double>(cfg.num_codebooks);
                const double freq = static_cast<double>(tv_exceed) / books;
                const double p2freq = static_cast<double>(p2_exceed) / books;
                const double slack = 1.96 * std::sqrt(rhs * (1.0 - rhs) / books);
                const double atyp_bound =
                    atypical_mass_tail_bound(std::min(mu, 1.0), cfg.delta, n, rate);
                const double atyp_slack =
                    3.0 * std::sqrt(atyp_bound * (1.0 - atyp_bound) / books);
                auto row = make_base();
                row[7] = Cell{std::string("summary")};
                row[22] = Cell{freq};
                row[23] = Cell{rhs};
                row[24] = Cell{slack};
                row[25] = Cell{p2freq};
                row[26] = Cell{atyp_bound};
                row[27] = Cell{atyp_slack};
                row[28] = Cell{mean_tv};
                out.table.rows.push_back(std::move(row));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// second-order
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kSecondOrderColumns = {
    "experiment_id", "channel", "n", "R_nats", "M",
    "xi", "c", "d", "epsilon", "mu", "threshold", "second_order_rhs",
    "hypothesis_met", "empirical_skipped",
    "codebook_seed", "tv", "tv_stderr", "method", "tv_exceeds",
    "tv_exceed_freq", "binom_slack", "wall_ms",
};

} // namespace

ExperimentResult run_second_order(const ExperimentConfig& cfg) {
    const FiniteChannel ch = build_finite_channel(cfg.channel);
    const DiscreteDistribution qx = build_finite_input(cfg.input, ch.num_inputs());
    const DiscreteDistribution qy = output_distribution(ch, qx);
    const double mi = mutual_information(ch, qx);
    const auto [v, rho] = dispersion_moments(ch, qx);
    if (!(v > 0.0))
        throw DomainError("run_second_order: degenerate dispersion (V = 0)");

    ExperimentResult out;
    out.table.columns = kSecondOrderColumns;

    auto make_base = [&](int n) {
        std::vector<Cell> row(kSecondOrderColumns.size(), Cell{std::monostate{}});
        row[0] = Cell{cfg.experiment_id};
        row[1] = Cell{cfg.channel.label};
        row[2] = Cell{std::int64_t{n}};
        row[5] = Cell{cfg.xi};
        row[6] = Cell{cfg.c};
        row[7] = Cell{cfg.d};
        row[21] = Cell{0.0};
        return row;
    };

    for (const int n : cfg.n_list) {
        ++out.status.evaluation_points;
        SecondOrderParams sched;
        try {
            sched = second_order_schedule(mi, v, rho, cfg.xi, cfg.c, cfg.d, n);
        } catch (const HypothesisViolationError&) {
            ++out.status.hypothesis_failures;
            auto row = make_base(n);
            row[12] = Cell{false};
            out.table.rows.push_back(std::move(row));
            continue;
        }
        const double threshold =
            sched.mu * (1.0 + 1.0 / std::sqrt(static_cast<double>(n))) +
            1.0 / std::sqrt(static_cast<double>(n));
        const double rhs = second_order_rhs(sched.mu, n, sched.rate, cfg.c, cfg.d);

        auto fill_formula = [&](std::vector<Cell>& row) {
            row[3] = Cell{sched.rate};
            row[8] = Cell{sched.epsilon};
            row[9] = Cell{sched.mu};
            row[10] = Cell{threshold};
            row[11] = Cell{rhs};
            row[12] = Cell{true};
        };

        std::int64_t m = 0;
        try {
            m = codebook_size(n, sched.rate, cfg.max_codebook_size);
        } catch (const SizeError&) {
            auto row = make_base(n);
            fill_formula(row);
            row[13] = Cell{true}; // formula columns only at this block length
            out.table.rows.push_back(std::move(row));
            continue;
        }

        bool exact = true;
        {
            double blocks = 1.0;
            for (int j = 0; j < n; ++j) blocks *= ch.num_outputs();
            exact = blocks <= static_cast<double>(cfg.enumeration_cap);
        }
        struct BookCell {
            std::uint64_t seed = 0;
            double tv = 0.0;
            std::optional<double> tv_stderr;
            std::string method;
            double wall_ms = 0.0;
        };
        std::vector<BookCell> cells(static_cast<std::size_t>(cfg.num_codebooks));
        parallel_for(cfg.num_codebooks, cfg.threads, [&](std::int64_t b) {
            const auto start = Clock::now();
            BookCell& cell = cells[static_cast<std::size_t>(b)];
            cell.seed = row_seed(cfg, "cb", n, sched.rate, b);
            const auto cb = draw_codebook(qx, n, sched.rate, cell.seed,
                                          cfg.max_codebook_size);
            if (exact) {
                cell.method = to_string(TvMethod::ExactEnumeration);
                cell.tv = tv_exact(ch, cb, qy, cfg.enumeration_cap).tv;
            } else {
                cell.method = to_string(TvMethod::MonteCarlo);
                const auto r =
                    tv_monte_carlo(ch, cb, qy, cfg.num_mc_samples,
                                   row_seed(cfg, "tv-mc", n, sched.rate, b));
                cell.tv = r.tv;
                cell.tv_stderr = r.std_error;
            }
            cell.wall_ms = elapsed_ms(start, cfg.timing);
        });

        std::int64_t exceed = 0;
        for (const auto& c : cells)
            if (c.tv > threshold) ++exceed;

        for (const auto& c : cells) {
            auto row = make_base(n);
            fill_formula(row);
            row[4] = Cell{std::int64_t{m}};
            row[13] = Cell{false};
            row[14] = Cell{std::uint64_t{c.seed}};
            row[15] = Cell{c.tv};
            row[16] = opt_cell(c.tv_stderr);
            row[17] = Cell{c.method};
            row[18] = Cell{c.tv > threshold};
            row[21] = Cell{c.wall_ms};
            out.table.rows.push_back(std::move(row));
        }
        {
            const double books = static_cast<double>(cfg.num_codebooks);
            auto row = make_base(n);
            fill_formula(row);
            row[4] = Cell{std::int64_t{m}};
            row[13] = Cell{false};
            row[17] = Cell{std::string("summary")};
            row[19] = Cell{static_cast<double>(exceed) / books};
            row[20] = Cell{1.96 * std::sqrt(rhs * (1.0 - rhs) / books)};
            out.table.rows.push_back(std::move(row));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// converse-audit
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kConverseColumns = {
    "experiment_id", "channel", "n", "R_nats", "M", "codebook_seed",
    "quantizer_k", "output_size", "delta", "delta_stderr", "method",
    "mi_averaged", "slack", "holds", "skipped", "wall_ms",
};

ExperimentResult run_converse_audit_finite(const ExperimentConfig& cfg) {
    const FiniteChannel ch = build_finite_channel(cfg.channel);
    const DiscreteDistribution qx = build_finite_input(cfg.input, ch.num_inputs());
    const DiscreteDistribution qy = output_distribution(ch, qx);

    ExperimentResult out;
    out.table.columns = kConverseColumns;
    for (const int n : cfg.n_list) {
        for (const double rate : cfg.rate_list) {
            ++out.status.evaluation_points;
            const std::int64_t m = codebook_size(n, rate, cfg.max_codebook_size);
            bool exact = true;
            {
                double blocks = 1.0;
                for (int j = 0; j < n; ++j) blocks *= ch.num_outputs();
                exact = blocks <= static_cast<double>(cfg.enumeration_cap);
            }
            struct BookCell {
                std::uint64_t seed = 0;
                double delta = 0.0;
                std::optional<double> delta_stderr;
                std::string method;
                bool skipped = false;
                ConverseReport report;
                double wall_ms = 0.0;
            };
            std::vector<BookCell> cells(static_cast<std::size_t>(cfg.num_codebooks));
            parallel_for(cfg.num_codebooks, cfg.threads, [&](std::int64_t b) {
                const auto start = Clock::now();
                BookCell& cell = cells[static_cast<std::size_t>(b)];
                cell.seed = row_seed(cfg, "cb", n, rate, b);
                const auto cb =
                    draw_codebook(qx, n, rate, cell.seed, cfg.max_codebook_size);
                if (exact) {
                    cell.method = to_string(TvMethod::ExactEnumeration);
                    cell.delta = tv_exact(ch, cb, qy, cfg.enumeration_cap).tv;
                } else {
                    cell.method = to_string(TvMethod::MonteCarlo);
                    const auto r =
                        tv_monte_carlo(ch, cb, qy, cfg.num_mc_samples,
                                       row_seed(cfg, "tv-mc", n, rate, b));
                    cell.delta = r.tv;
                    cell.delta_stderr = r.std_error;
                }
                if (cell.delta > 0.25) {
                    cell.skipped = true;
                } else {
                    cell.report = converse_check(ch, cb, cell.delta);
                }
                cell.wall_ms = elapsed_ms(start, cfg.timing);
            });
            for (const auto& c : cells) {
                std::vector<Cell> row(kConverseColumns.size(), Cell{std::monostate{}});
                row[0] = Cell{cfg.experiment_id};
                row[1] = Cell{cfg.channel.label};
                row[2] = Cell{std::int64_t{n}};
                row[3] = Cell{rate};
                row[4] = Cell{std::int64_t{m}};
                row[5] = Cell{std::uint64_t{c.seed}};
                row[7] = Cell{std::int64_t{ch.num_outputs()}};
                row[8] = Cell{c.delta};
                row[9] = opt_cell(c.delta_stderr);
                row[10] = Cell{c.method};
                row[14] = Cell{c.skipped};
                row[15] = Cell{c.wall_ms};
                if (!c.skipped) {
                    row[11] = Cell{c.report.mi_averaged};
                    row[12] = Cell{c.report.slack};
                    row[13] = Cell{c.report.holds};
                }
                out.table.rows.push_back(std::move(row));
            }
        }
    }
    return out;
}

ExperimentResult run_converse_audit_awgn(const ExperimentConfig& cfg) {
    const AwgnChannel ch(cfg.channel.awgn_noise_variance);
    const GaussianDistribution qx(0.0, cfg.input.power);
    const GaussianDistribution qy = output_distribution(ch, qx);
    const InputGrid grid{-cfg.input_grid_halfwidth, cfg.input_grid_halfwidth,
                         cfg.input_grid_levels};

    ExperimentResult out;
    out.table.columns = kConverseColumns;
    for (const int n : cfg.n_list) {
        for (const double rate : cfg.rate_list) {
            ++out.status.evaluation_points;
            const std::int64_t m = codebook_size(n, rate, cfg.max_codebook_size);
            for (std::int64_t b = 0; b < cfg.num_codebooks; ++b) {
                const std::uint64_t seed = row_seed(cfg, "cb", n, rate, b);
                const auto cb =
                    draw_codebook(qx, n, rate, seed, cfg.max_codebook_size);
                const auto start = Clock::now();

                // Unquantized reference estimate.
                const auto mc = tv_monte_carlo(ch, cb, qy, cfg.num_mc_samples,
                                               row_seed(cfg, "tv-mc", n, rate, b));
                {
                    std::vector<Cell> row(kConverseColumns.size(),
                                          Cell{std::monostate{}});
                    row[0] = Cell{cfg.experiment_id};
                    row[1] = Cell{cfg.channel.label};
                    row[2] = Cell{std::int64_t{n}};
                    row[3] = Cell{rate};
                    row[4] = Cell{std::int64_t{m}};
                    row[5] = Cell{std::uint64_t{seed}};
                    row[8] = Cell{mc.tv};
                    row[9] = opt_cell(mc.std_error);
                    row[10] = Cell{std::string("monte-carlo")};
                    row[14] = Cell{true}; // reference row, no converse check
                    row[15] = Cell{elapsed_ms(start, cfg.timing)};
                    out.table.rows.push_back(std::move(row));
                }

                for (const int k : cfg.quantizer_levels) {
                    const auto kstart = Clock::now();
                    const Quantizer quant = Quantizer::equiprobable(qy, k);
                    const QuantizedAwgn qch = quantize_channel(ch, quant);
                    const DiscreteDistribution qy_k =
                        quantize_distribution(qy, quant);
                    double delta;
                    std::optional<double> delta_stderr;
                    std::string method;
                    double blocks = 1.0;
                    for (int j = 0; j < n; ++j) blocks *= k;
                    if (blocks <= static_cast<double>(cfg.enumeration_cap)) {
                        delta = tv_exact(qch, cb, qy_k, cfg.enumeration_cap).tv;
                        method = to_string(TvMethod::ExactEnumeration);
                    } else {
                        const auto r = tv_monte_carlo(
                            qch, cb, qy_k, cfg.num_mc_samples,
                            row_seed(cfg, "tv-mc-q" + std::to_string(k), n, rate, b));
                        delta = r.tv;
                        delta_stderr = r.std_error;
                        method = to_string(TvMethod::MonteCarlo);
                    }
                    std::vector<Cell> row(kConverseColumns.size(),
                                          Cell{std::monostate{}});
                    row[0] = Cell{cfg.experiment_id};
                    row[1] = Cell{cfg.channel.label};
                    row[2] = Cell{std::int64_t{n}};
                    row[3] = Cell{rate};
                    row[4] = Cell{std::int64_t{m}};
                    row[5] = Cell{std::uint64_t{seed}};
                    row[6] = Cell{std::int64_t{k}};
                    row[7] = Cell{std::int64_t{k}};
                    row[8] = Cell{delta};
                    row[9] = opt_cell(delta_stderr);
                    row[10] = Cell{method};
                    row[15] = Cell{elapsed_ms(kstart, cfg.timing)};
                    if (delta > 0.25) {
                        row[14] = Cell{true};
                    } else {
                        const auto rep = converse_check(qch, cb, grid, delta);
                        row[11] = Cell{rep.mi_averaged};
                        row[12] = Cell{rep.slack};
                        row[13] = Cell{rep.holds};
                        row[14] = Cell{false};
                    }
                    out.table.rows.push_back(std::move(row));
                }
            }
        }
    }
    return out;
}

} // namespace

ExperimentResult run_converse_audit(const ExperimentConfig& cfg) {
    if (cfg.channel.is_finite()) return run_converse_audit_finite(cfg);
    if (cfg.channel.kind == ChannelSpec::Kind::Awgn)
        return run_converse_audit_awgn(cfg);
    throw ConfigError("converse-audit supports finite and awgn channels");
}

// ---------------------------------------------------------------------------
// bounds-table
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kBoundsColumns = {
    "experiment_id", "channel", "n", "R_nats",
    "mutual_information", "V", "rho", "d_alpha",
    "epsilon", "alpha", "beta1", "beta2", "gamma1", "gamma2", "n_min", "delta",
    "hypothesis_met",
    "mu_exact", "atypical_chernoff_bound", "atypical_tail_bound",
    "typical_tail_bound_log", "first_order_threshold",
    "first_order_rhs_log_neg_log",
    "xi", "c", "d", "so_rate", "so_mu", "so_threshold", "so_rhs",
};

} // namespace

ExperimentResult run_bounds_table(const ExperimentConfig& cfg) {
    const FiniteChannel ch = build_finite_channel(cfg.channel);
    const DiscreteDistribution qx = build_finite_input(cfg.input, ch.num_inputs());
    const InfoStats stats = compute_info_stats(ch, qx);

    ExperimentResult out;
    out.table.columns = kBoundsColumns;

    for (const double rate : cfg.rate_list) {
        const FirstOrderParams params =
            select_first_order_params(stats.mutual_information, stats.renyi_grid, rate);
        double d_alpha = kPosInf;
        double best_gap = kPosInf;
        for (const auto& [a, d] : stats.renyi_grid) {
            const double gap = std::abs(a - params.alpha);
            if (gap < best_gap) {
                best_gap = gap;
                d_alpha = d;
            }
        }
        for (const int n : cfg.n_list) {
            ++out.status.evaluation_points;
            const bool hypothesis_met = n >= params.n_min;
            const double mu = atypical_mass_expectation(ch, qx, n, params.epsilon);

            std::vector<Cell> row(kBoundsColumns.size(), Cell{std::monostate{}});
            row[0] = Cell{cfg.experiment_id};
            row[1] = Cell{cfg.channel.label};
            row[2] = Cell{std::int64_t{n}};
            row[3] = Cell{rate};
            row[4] = Cell{stats.mutual_information};
            row[5] = Cell{stats.central_second_moment};
            row[6] = Cell{stats.abs_third_moment};
            row[7] = Cell{d_alpha};
            row[8] = Cell{params.epsilon};
            row[9] = Cell{params.alpha};
            row[10] = Cell{params.beta1};
            row[11] = Cell{params.beta2};
            row[12] = Cell{params.gamma1};
            row[13] = Cell{params.gamma2};
            row[14] = Cell{std::int64_t{params.n_min}};
            row[15] = Cell{cfg.delta};
            row[16] = Cell{hypothesis_met};
            row[17] = Cell{mu};
            row[18] = Cell{atypical_chernoff_bound(params.alpha,
                                                   stats.mutual_information,
                                                   params.epsilon, d_alpha, n)};
            row[19] = Cell{atypical_mass_tail_bound(std::min(mu, 1.0), cfg.delta,
                                                    n, rate)};
            if (hypothesis_met) {
                const double lambda = std::exp(n * params.beta2);
                const double delta = std::exp(-n * params.beta1);
                row[20] = Cell{typical_part_tail_bound_log(
                    delta, lambda, n, rate, stats.mutual_information,
                    params.epsilon)};
            }
            row[21] = Cell{first_order_threshold(params.gamma1, n)};
            row[22] = Cell{first_order_rhs_log_neg_log(params.gamma2, n)};
            if (stats.central_second_moment > 0.0) {
                row[23] = Cell{cfg.xi};
                row[24] = Cell{cfg.c};
                row[25] = Cell{cfg.d};
                try {
                    const SecondOrderParams so = second_order_schedule(
                        stats.mutual_information, stats.central_second_moment,
                        stats.abs_third_moment, cfg.xi, cfg.c, cfg.d, n);
                    const double root_n = std::sqrt(static_cast<double>(n));
                    row[26] = Cell{so.rate};
                    row[27] = Cell{so.mu};
                    row[28] = Cell{so.mu * (1.0 + 1.0 / root_n) + 1.0 / root_n};
                    row[29] = Cell{second_order_rhs(so.mu, n, so.rate, cfg.c, cfg.d)};
                } catch (const HypothesisViolationError&) {
                    // second-order block stays empty at this n
                }
            }
            out.table.rows.push_back(std::move(row));
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::TvSweep: return run_tv_sweep(cfg);
        case ExperimentKind::Concentration: return run_concentration(cfg);
        case ExperimentKind::SecondOrder: return run_second_order(cfg);
        case ExperimentKind::ConverseAudit: return run_converse_audit(cfg);
        case ExperimentKind::BoundsTable: return run_bounds_table(cfg);
    }
    throw ConfigError("unknown experiment kind");
}

} // namespace resolv
