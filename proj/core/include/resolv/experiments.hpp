#ifndef RESOLV_EXPERIMENTS_HPP
#define RESOLV_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "resolv/config.hpp"

namespace resolv {

// One output cell; monostate renders as an empty field.
using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double,
                          bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c);
void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);
std::string render_table(const Table& t, OutputFormat format);

// Header + string cells, for round-trip checks of emitted CSV.
Table read_csv(std::istream& is);

// Renders to the path; IO failures surface as Error with the path attached.
void emit(const Table& t, OutputFormat format, const std::string& path);

struct RunStatus {
    int evaluation_points = 0;      // (n, R) combinations attempted
    int hypothesis_failures = 0;    // points rejected by a bound hypothesis
    bool only_hypothesis_failures() const {
        return evaluation_points > 0 && hypothesis_failures == evaluation_points;
    }
};

struct ExperimentResult {
    Table table;
    RunStatus status;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

ExperimentResult run_tv_sweep(const ExperimentConfig& cfg);
ExperimentResult run_concentration(const ExperimentConfig& cfg);
ExperimentResult run_second_order(const ExperimentConfig& cfg);
ExperimentResult run_converse_audit(const ExperimentConfig& cfg);
ExperimentResult run_bounds_table(const ExperimentConfig& cfg);

// Runs fn(0..count-1) on up to `threads` workers. Work items must write only
// to their own slots; the first exception is rethrown after joining.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn);

} // namespace resolv

#endif
