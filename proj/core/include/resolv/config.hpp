#ifndef RESOLV_CONFIG_HPP
#define RESOLV_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resolv {

// Flat key = value config file: one assignment per line, '#' comments,
// schema versioned through a mandatory `version = 1` key.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_text(const std::string& text,
                                     const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string require_string(const std::string& key) const;
    std::int64_t require_int(const std::string& key) const;
    std::uint64_t require_u64(const std::string& key) const;
    double require_double(const std::string& key) const;

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<bool> get_flag(const std::string& key) const; // on/off/true/false

    // Comma-separated lists.
    std::vector<std::int64_t> get_int_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    // Semicolon-separated rows of whitespace-separated reals.
    std::vector<std::vector<double>> get_matrix(const std::string& key) const;

    // ConfigError mentioning every key not in `known`.
    void check_known_keys(const std::vector<std::string>& known) const;

    // Diagnostic prefix "<origin>:<line>: key" for error messages.
    std::string where(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

enum class ExperimentKind {
    TvSweep,
    Concentration,
    SecondOrder,
    ConverseAudit,
    BoundsTable,
};

std::string to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_kind_from_string(const std::string& s);

enum class OutputFormat { Csv, Json };

struct ChannelSpec {
    enum class Kind { Bsc, Dmc, Identity, Awgn, Rayleigh };
    Kind kind = Kind::Bsc;
    double bsc_crossover = 0.25;
    int identity_size = 2;
    std::vector<std::vector<double>> dmc_rows;
    double awgn_noise_variance = 1.0;
    double rayleigh_fading_power = 1.0;
    double rayleigh_noise_variance = 1.0;
    std::string label; // e.g. "bsc(0.25)"

    bool is_finite() const {
        return kind == Kind::Bsc || kind == Kind::Dmc || kind == Kind::Identity;
    }
};

struct InputSpec {
    enum class Kind { Uniform, Pmf, Gaussian };
    Kind kind = Kind::Uniform;
    std::vector<double> pmf;
    double power = 1.0; // Gaussian input variance
};

struct ExperimentConfig {
    int version = 1;
    ExperimentKind kind = ExperimentKind::TvSweep;
    std::string experiment_id;
    ChannelSpec channel;
    InputSpec input;

    std::vector<int> n_list;
    std::vector<double> rate_list;

    std::optional<double> epsilon; // typicality parameter for splits
    double delta = 1.0;            // atypical-tail deviation parameter

    double xi = 0.1; // second-order target tail
    double c = 2.0;
    double d = 0.5;

    std::vector<int> quantizer_levels{2, 4, 8, 16};
    int input_grid_levels = 64;
    double input_grid_halfwidth = 4.0;

    std::int64_t num_codebooks = 100;
    std::int64_t num_mc_samples = 100000;
    std::uint64_t master_seed = 0;

    std::string out_path = "results.csv";
    OutputFormat format = OutputFormat::Csv;
    std::int64_t enumeration_cap = std::int64_t{1} << 20;
    std::int64_t max_codebook_size = std::int64_t{1} << 24;
    int threads = 1;
    bool timing = false;

    // Parse + validate. `forced_kind` comes from the CLI verb; a conflicting
    // `experiment` key in the file is a config error.
    static ExperimentConfig from_config(const KeyValueConfig& kv,
                                        std::optional<ExperimentKind> forced_kind = {});
};

} // namespace resolv

#endif
