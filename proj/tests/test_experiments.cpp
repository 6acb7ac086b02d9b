#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resolv/config.hpp"
#include "resolv/errors.hpp"
#include "resolv/experiments.hpp"

using namespace resolv;

namespace {

ExperimentConfig parse(const std::string& text) {
    return ExperimentConfig::from_config(KeyValueConfig::parse_text(text));
}

const std::string kTinySweep =
    "version = 1\nexperiment = tv-sweep\nchannel = bsc\nbsc_p = 0.25\n"
    "input = uniform\nn_list = 3,4\nrate_list = 0.5\nepsilon = 0.1\n"
    "num_codebooks = 4\nmaster_seed = 7\n";

double cell_double(const Cell& c) { return std::get<double>(c); }

std::size_t column_index(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    REQUIRE(false);
    return 0;
}

} // namespace

TEST_CASE("cell formatting") {
    CHECK(format_cell(Cell{std::monostate{}}) == "");
    CHECK(format_cell(Cell{true}) == "true");
    CHECK(format_cell(Cell{false}) == "false");
    CHECK(format_cell(Cell{std::int64_t{42}}) == "42");
    CHECK(format_cell(Cell{std::string("abc")}) == "abc");
    // %.17g round-trips doubles exactly
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_cell(Cell{v})) == v);
}

TEST_CASE("sweep csv column contract") {
    const auto r = run_tv_sweep(parse(kTinySweep));
    std::ostringstream ss;
    write_csv(r.table, ss);
    const std::string header = ss.str().substr(0, ss.str().find('\n'));
    CHECK(header ==
          "experiment_id,channel,n,R_nats,M,codebook_seed,tv,tv_stderr,method,"
          "p2_mass,epsilon,wall_ms");
}

TEST_CASE("csv round trip preserves every rendered cell") {
    const auto r = run_tv_sweep(parse(kTinySweep));
    std::stringstream ss;
    write_csv(r.table, ss);
    const Table back = read_csv(ss);
    REQUIRE(back.columns == r.table.columns);
    REQUIRE(back.rows.size() == r.table.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i)
        for (std::size_t j = 0; j < back.columns.size(); ++j)
            CHECK(std::get<std::string>(back.rows[i][j]) ==
                  format_cell(r.table.rows[i][j]));
}

TEST_CASE("json emission carries typed values and nulls") {
    const auto r = run_tv_sweep(parse(kTinySweep));
    std::ostringstream ss;
    write_json(r.table, ss);
    const std::string text = ss.str();
    CHECK(text.find("\"experiment_id\": \"tv-sweep\"") != std::string::npos);
    CHECK(text.find("\"tv_stderr\": null") != std::string::npos); // exact rows
    CHECK(text.front() == '[');
}

TEST_CASE("same config and seed produce byte identical output") {
    const auto cfg = parse(kTinySweep);
    const auto r1 = run_tv_sweep(cfg);
    const auto r2 = run_tv_sweep(cfg);
    CHECK(render_table(r1.table, OutputFormat::Csv) ==
          render_table(r2.table, OutputFormat::Csv));
    CHECK(render_table(r1.table, OutputFormat::Json) ==
          render_table(r2.table, OutputFormat::Json));
}

TEST_CASE("thread count does not change the output") {
    auto cfg = parse(kTinySweep);
    cfg.num_codebooks = 16;
    const auto serial = run_tv_sweep(cfg);
    cfg.threads = 4;
    const auto parallel = run_tv_sweep(cfg);
    CHECK(render_table(serial.table, OutputFormat::Csv) ==
          render_table(parallel.table, OutputFormat::Csv));
}

TEST_CASE("summary rows match recomputed per-row statistics") {
    const auto r = run_tv_sweep(parse(kTinySweep));
    const auto tv_col = column_index(r.table, "tv");
    const auto method_col = column_index(r.table, "method");
    const auto n_col = column_index(r.table, "n");

    double sum = 0.0, maxv = 0.0;
    int count = 0;
    for (const auto& row : r.table.rows) {
        if (std::get<std::int64_t>(row[n_col]) != 3) continue;
        const std::string method = std::get<std::string>(row[method_col]);
        if (method == "exact-enumeration") {
            const double tv = cell_double(row[tv_col]);
            sum += tv;
            maxv = std::max(maxv, tv);
            ++count;
        } else if (method == "summary-mean") {
            CHECK(cell_double(row[tv_col]) ==
                  doctest::Approx(sum / count).epsilon(1e-12));
        } else if (method == "summary-max") {
            CHECK(cell_double(row[tv_col]) == doctest::Approx(maxv).epsilon(1e-15));
        }
    }
    CHECK(count == 4);
}

TEST_CASE("zero rate sweeps use single-codeword codebooks") {
    auto cfg = parse(kTinySweep);
    cfg.rate_list = {0.0};
    const auto r = run_tv_sweep(cfg);
    const auto m_col = column_index(r.table, "M");
    for (const auto& row : r.table.rows)
        CHECK(std::get<std::int64_t>(row[m_col]) == 1);
}

TEST_CASE("continuous sweeps run monte carlo") {
    const auto cfg = parse(
        "version = 1\nexperiment = tv-sweep\nchannel = awgn\nawgn_noise_var = 1\n"
        "input = gaussian\ninput_power = 1\nn_list = 3\nrate_list = 0.8\n"
        "epsilon = 0.2\nnum_codebooks = 2\nnum_mc_samples = 2000\nmaster_seed = 5\n");
    const auto r = run_tv_sweep(cfg);
    const auto method_col = column_index(r.table, "method");
    const auto tv_col = column_index(r.table, "tv");
    const auto se_col = column_index(r.table, "tv_stderr");
    int mc_rows = 0;
    for (const auto& row : r.table.rows) {
        if (std::get<std::string>(row[method_col]) != "monte-carlo") continue;
        ++mc_rows;
        CHECK(cell_double(row[tv_col]) >= 0.0);
        CHECK(cell_double(row[se_col]) >= 0.0);
    }
    CHECK(mc_rows == 2);

    const auto rayleigh = run_tv_sweep(parse(
        "version = 1\nexperiment = tv-sweep\nchannel = rayleigh\n"
        "rayleigh_fading_power = 1\nrayleigh_noise_var = 1\n"
        "input = gaussian\ninput_power = 1\nn_list = 2\nrate_list = 0.8\n"
        "num_codebooks = 2\nnum_mc_samples = 1000\nmaster_seed = 6\n"));
    CHECK(rayleigh.table.rows.size() == 4); // 2 books + 2 summaries
}

TEST_CASE("awgn sweep above capacity decays with the block length") {
    // R = 2I: doubling n should visibly shrink the mean estimated TV
    const auto cfg = parse(
        "version = 1\nexperiment = tv-sweep\nchannel = awgn\nawgn_noise_var = 1\n"
        "input = gaussian\ninput_power = 1\nn_list = 4,8\n"
        "rate_list = 0.6931471805599453\nnum_codebooks = 8\n"
        "num_mc_samples = 5000\nmaster_seed = 14\n");
    const auto r = run_tv_sweep(cfg);
    const auto n_col = column_index(r.table, "n");
    const auto tv_col = column_index(r.table, "tv");
    const auto method_col = column_index(r.table, "method");
    double mean4 = -1.0, mean8 = -1.0;
    for (const auto& row : r.table.rows) {
        if (std::get<std::string>(row[method_col]) != "summary-mean") continue;
        if (std::get<std::int64_t>(row[n_col]) == 4) mean4 = cell_double(row[tv_col]);
        else mean8 = cell_double(row[tv_col]);
    }
    REQUIRE(mean4 >= 0.0);
    REQUIRE(mean8 >= 0.0);
    CHECK(mean8 < mean4);
}

TEST_CASE("concentration emits parameter echoes and flags small n") {
    const auto cfg = parse(
        "version = 1\nexperiment = concentration\nchannel = bsc\nbsc_p = 0.25\n"
        "input = uniform\nn_list = 4\nrate_list = 0.5\nnum_codebooks = 8\n"
        "master_seed = 11\n");
    const auto r = run_concentration(cfg);
    const auto hyp_col = column_index(r.table, "hypothesis_met");
    const auto gamma1_col = column_index(r.table, "gamma1");
    const auto nmin_col = column_index(r.table, "n_min");
    REQUIRE(!r.table.rows.empty());
    for (const auto& row : r.table.rows) {
        CHECK(!std::get<bool>(row[hyp_col])); // n = 4 < n_min = 19
        CHECK(std::get<double>(row[gamma1_col]) > 0.0);
        CHECK(std::get<std::int64_t>(row[nmin_col]) == 19);
    }
    // short blocks are flagged yet fully evaluated; not a hypothesis-only run
    CHECK(!r.status.only_hypothesis_failures());

    // infeasible rate surfaces as the dedicated error
    auto bad = cfg;
    bad.rate_list = {0.05};
    CHECK_THROWS_AS(static_cast<void>(run_concentration(bad)), InfeasibleParamsError);
}

TEST_CASE("second order flags hypothesis violations per block length") {
    const auto cfg = parse(
        "version = 1\nexperiment = second-order\nchannel = bsc\nbsc_p = 0.25\n"
        "input = uniform\nn_list = 8,12\nxi = 0.1\nc = 2\nd = 0.5\n"
        "num_codebooks = 6\nnum_mc_samples = 1000\nmaster_seed = 13\n");
    const auto r = run_second_order(cfg);
    const auto n_col = column_index(r.table, "n");
    const auto hyp_col = column_index(r.table, "hypothesis_met");
    const auto mu_col = column_index(r.table, "mu");
    int n8_rows = 0, n12_rows = 0;
    for (const auto& row : r.table.rows) {
        if (std::get<std::int64_t>(row[n_col]) == 8) {
            ++n8_rows;
            CHECK(!std::get<bool>(row[hyp_col])); // 8^{0.75} < 6
        } else {
            ++n12_rows;
            CHECK(std::get<bool>(row[hyp_col]));
            CHECK(std::get<double>(row[mu_col]) > 0.0);
        }
    }
    CHECK(n8_rows == 1);
    CHECK(n12_rows == 6 + 1); // per-book rows plus a summary
    CHECK(r.status.hypothesis_failures == 1);
    CHECK(!r.status.only_hypothesis_failures());

    // on accepted block lengths the exceedance frequency sits under the bound
    const auto freq_col = column_index(r.table, "tv_exceed_freq");
    const auto rhs_col = column_index(r.table, "second_order_rhs");
    const auto slack_col = column_index(r.table, "binom_slack");
    bool saw_summary = false;
    for (const auto& row : r.table.rows) {
        if (std::holds_alternative<std::monostate>(row[freq_col])) continue;
        saw_summary = true;
        CHECK(std::get<double>(row[freq_col]) <=
              std::get<double>(row[rhs_col]) + std::get<double>(row[slack_col]));
    }
    CHECK(saw_summary);

    // every accepted block length rejected -> hypothesis-only status
    auto all_small = cfg;
    all_small.n_list = {4, 8};
    const auto r2 = run_second_order(all_small);
    CHECK(r2.status.only_hypothesis_failures());
}

TEST_CASE("converse audit emits holding rows for finite channels") {
    const auto cfg = parse(
        "version = 1\nexperiment = converse-audit\nchannel = bsc\nbsc_p = 0.25\n"
        "input = uniform\nn_list = 6\nrate_list = 0.5\nnum_codebooks = 6\n"
        "master_seed = 17\n");
    const auto r = run_converse_audit(cfg);
    const auto holds_col = column_index(r.table, "holds");
    const auto skipped_col = column_index(r.table, "skipped");
    int checked = 0;
    for (const auto& row : r.table.rows) {
        if (std::get<bool>(row[skipped_col])) continue;
        ++checked;
        CHECK(std::get<bool>(row[holds_col]));
    }
    CHECK(checked > 0);
}

TEST_CASE("converse audit on awgn refines toward the unquantized tv") {
    const auto cfg = parse(
        "version = 1\nexperiment = converse-audit\nchannel = awgn\n"
        "awgn_noise_var = 1\ninput = gaussian\ninput_power = 1\nn_list = 4\n"
        "rate_list = 0.7\nquantizer_levels = 2,4,8\nnum_codebooks = 2\n"
        "num_mc_samples = 20000\nmaster_seed = 31\n");
    const auto r = run_converse_audit(cfg);
    const auto k_col = column_index(r.table, "quantizer_k");
    const auto delta_col = column_index(r.table, "delta");
    const auto mi_col = column_index(r.table, "mi_averaged");
    const auto holds_col = column_index(r.table, "holds");
    double mc_delta = 0.0, prev_delta = -1.0, prev_mi = -1.0;
    for (const auto& row : r.table.rows) {
        if (std::holds_alternative<std::monostate>(row[k_col])) {
            mc_delta = std::get<double>(row[delta_col]); // reference row
            prev_delta = -1.0;
            prev_mi = -1.0;
            continue;
        }
        const double qd = std::get<double>(row[delta_col]);
        CHECK(qd <= mc_delta + 0.05);   // data processing, with MC slack
        CHECK(qd >= prev_delta - 1e-12); // refinement recovers distance
        CHECK(std::get<double>(row[mi_col]) >= prev_mi - 1e-12);
        CHECK(std::get<bool>(row[holds_col]));
        prev_delta = qd;
        prev_mi = std::get<double>(row[mi_col]);
    }
    CHECK(mc_delta > 0.0);
}

TEST_CASE("bounds table emits formulas without simulation") {
    const auto cfg = parse(
        "version = 1\nexperiment = bounds-table\nchannel = bsc\nbsc_p = 0.25\n"
        "input = uniform\nn_list = 10,20\nrate_list = 0.5\nmaster_seed = 19\n");
    const auto r = run_bounds_table(cfg);
    REQUIRE(r.table.rows.size() == 2);
    const auto mu_col = column_index(r.table, "mu_exact");
    const auto chern_col = column_index(r.table, "atypical_chernoff_bound");
    for (const auto& row : r.table.rows) {
        const double mu = std::get<double>(row[mu_col]);
        const double ch = std::get<double>(row[chern_col]);
        CHECK(mu >= 0.0);
        CHECK(ch >= mu); // the bound dominates the exact tail
    }
}

TEST_CASE("empty tables render as a bare header") {
    Table t;
    t.columns = {"a", "b"};
    std::ostringstream ss;
    write_csv(t, ss);
    CHECK(ss.str() == "a,b\n");
    std::ostringstream js;
    write_json(t, js);
    CHECK(js.str() == "[]\n");
}

TEST_CASE("emit writes files and surfaces io errors") {
    const auto r = run_tv_sweep(parse(kTinySweep));
    const std::string path = "emit_test_output.csv";
    emit(r.table, OutputFormat::Csv, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == render_table(r.table, OutputFormat::Csv));
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(emit(r.table, OutputFormat::Csv, "no_such_dir/x.csv"),
                         doctest::Contains("no_such_dir/x.csv"), Error);
}

TEST_CASE("parallel_for covers the range and propagates errors") {
    std::vector<std::atomic<int>> hits(64);
    parallel_for(64, 4, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(
        parallel_for(8, 4, [](std::int64_t i) {
            if (i == 3) throw DomainError("boom");
        }),
        DomainError);
}

TEST_CASE("run_experiment dispatches on the configured kind") {
    const auto r = run_experiment(parse(kTinySweep));
    CHECK(!r.table.rows.empty());
}
