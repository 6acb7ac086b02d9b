#include "resolv/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "resolv/errors.hpp"

namespace resolv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text,
                                          const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        cfg.entries_[key] = Entry{value, lineno};
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.count(key) > 0;
}

std::string KeyValueConfig::where(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return origin_ + ": " + key;
    return origin_ + ":" + std::to_string(it->second.line) + ": " + key;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return it->second.value;
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

std::int64_t KeyValueConfig::require_int(const std::string& key) const {
    const std::string v = require_string(key);
    try {
        std::size_t pos = 0;
        const std::int64_t r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError(where(key) + ": expected an integer, got '" + v + "'");
    }
}

std::uint64_t KeyValueConfig::require_u64(const std::string& key) const {
    const std::string v = require_string(key);
    try {
        std::size_t pos = 0;
        const std::uint64_t r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError(where(key) + ": expected an unsigned integer, got '" + v + "'");
    }
}

double KeyValueConfig::require_double(const std::string& key) const {
    const std::string v = require_string(key);
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError(where(key) + ": expected a number, got '" + v + "'");
    }
}

std::optional<std::int64_t> KeyValueConfig::get_int(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return require_int(key);
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return require_double(key);
}

std::optional<bool> KeyValueConfig::get_flag(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    std::string v = require_string(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(where(key) + ": expected on/off, got '" + v + "'");
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(const std::string& key) const {
    std::vector<std::int64_t> out;
    if (!has(key)) return out;
    for (const std::string& part : split(require_string(key), ',')) {
        if (part.empty())
            throw ConfigError(where(key) + ": empty list entry");
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(part, &pos));
            if (pos != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": expected an integer list entry, got '" +
                              part + "'");
        }
    }
    return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    for (const std::string& part : split(require_string(key), ',')) {
        if (part.empty())
            throw ConfigError(where(key) + ": empty list entry");
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(part, &pos));
            if (pos != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": expected a numeric list entry, got '" +
                              part + "'");
        }
    }
    return out;
}

std::vector<std::vector<double>> KeyValueConfig::get_matrix(
    const std::string& key) const {
    std::vector<std::vector<double>> rows;
    if (!has(key)) return rows;
    for (const std::string& rowtext : split(require_string(key), ';')) {
        std::vector<double> row;
        std::stringstream ss(rowtext);
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof())
            throw ConfigError(where(key) + ": malformed matrix row '" + rowtext + "'");
        if (row.empty())
            throw ConfigError(where(key) + ": empty matrix row");
        rows.push_back(std::move(row));
    }
    return rows;
}

void KeyValueConfig::check_known_keys(const std::vector<std::string>& known) const {
    for (const auto& [key, entry] : entries_) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                              ": unknown key '" + key + "'");
    }
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::TvSweep: return "tv-sweep";
        case ExperimentKind::Concentration: return "concentration";
        case ExperimentKind::SecondOrder: return "second-order";
        case ExperimentKind::ConverseAudit: return "converse-audit";
        case ExperimentKind::BoundsTable: return "bounds-table";
    }
    return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from_string(const std::string& s) {
    if (s == "tv-sweep") return ExperimentKind::TvSweep;
    if (s == "concentration") return ExperimentKind::Concentration;
    if (s == "second-order") return ExperimentKind::SecondOrder;
    if (s == "converse-audit") return ExperimentKind::ConverseAudit;
    if (s == "bounds-table") return ExperimentKind::BoundsTable;
    return std::nullopt;
}

namespace {

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "version", "experiment", "channel", "bsc_p", "identity_size", "dmc_rows",
        "awgn_noise_var", "rayleigh_fading_power", "rayleigh_noise_var",
        "input", "input_pmf", "input_power",
        "n_list", "rate_list", "epsilon", "delta", "xi", "c", "d",
        "quantizer_levels", "input_grid_levels", "input_grid_halfwidth",
        "num_codebooks", "num_mc_samples", "master_seed",
        "out", "format", "enumeration_cap", "max_codebook_size",
        "threads", "timing",
    };
    return keys;
}

std::string format_param(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

} // namespace

ExperimentConfig ExperimentConfig::from_config(
    const KeyValueConfig& kv, std::optional<ExperimentKind> forced_kind) {
    kv.check_known_keys(known_keys());
    ExperimentConfig cfg;

    cfg.version = static_cast<int>(kv.require_int("version"));
    if (cfg.version != 1)
        throw ConfigError(kv.where("version") + ": unsupported schema version " +
                          std::to_string(cfg.version));

    if (const auto s = kv.get_string("experiment")) {
        const auto k = experiment_kind_from_string(*s);
        if (!k) throw ConfigError(kv.where("experiment") + ": unknown experiment '" +
                                  *s + "'");
        if (forced_kind && *forced_kind != *k)
            throw ConfigError(kv.where("experiment") +
                              ": conflicts with the CLI subcommand");
        cfg.kind = *k;
    } else if (forced_kind) {
        cfg.kind = *forced_kind;
    } else {
        throw ConfigError("missing required key 'experiment'");
    }
    cfg.experiment_id = to_string(cfg.kind);

    // channel
    const std::string chname = kv.require_string("channel");
    if (chname == "bsc") {
        cfg.channel.kind = ChannelSpec::Kind::Bsc;
        cfg.channel.bsc_crossover = kv.require_double("bsc_p");
        if (!(cfg.channel.bsc_crossover >= 0.0 && cfg.channel.bsc_crossover <= 1.0))
            throw ConfigError(kv.where("bsc_p") + ": must lie in [0,1]");
        cfg.channel.label = "bsc(" + format_param(cfg.channel.bsc_crossover) + ")";
    } else if (chname == "identity") {
        cfg.channel.kind = ChannelSpec::Kind::Identity;
        cfg.channel.identity_size =
            static_cast<int>(kv.get_int("identity_size").value_or(2));
        if (cfg.channel.identity_size < 1)
            throw ConfigError(kv.where("identity_size") + ": must be >= 1");
        cfg.channel.label =
            "identity(" + std::to_string(cfg.channel.identity_size) + ")";
    } else if (chname == "dmc") {
        cfg.channel.kind = ChannelSpec::Kind::Dmc;
        cfg.channel.dmc_rows = kv.get_matrix("dmc_rows");
        if (cfg.channel.dmc_rows.empty())
            throw ConfigError("channel = dmc requires dmc_rows");
        cfg.channel.label = "dmc(" +
                            std::to_string(cfg.channel.dmc_rows.size()) + "x" +
                            std::to_string(cfg.channel.dmc_rows.front().size()) + ")";
    } else if (chname == "awgn") {
        cfg.channel.kind = ChannelSpec::Kind::Awgn;
        cfg.channel.awgn_noise_variance = kv.require_double("awgn_noise_var");
        if (!(cfg.channel.awgn_noise_variance > 0.0))
            throw ConfigError(kv.where("awgn_noise_var") + ": must be positive");
        cfg.channel.label =
            "awgn(" + format_param(cfg.channel.awgn_noise_variance) + ")";
    } else if (chname == "rayleigh") {
        cfg.channel.kind = ChannelSpec::Kind::Rayleigh;
        cfg.channel.rayleigh_fading_power = kv.require_double("rayleigh_fading_power");
        cfg.channel.rayleigh_noise_variance = kv.require_double("rayleigh_noise_var");
        if (!(cfg.channel.rayleigh_fading_power > 0.0) ||
            !(cfg.channel.rayleigh_noise_variance > 0.0))
            throw ConfigError("rayleigh parameters must be positive");
        // '/' rather than ',' so the label stays a single CSV cell
        cfg.channel.label = "rayleigh(" +
                            format_param(cfg.channel.rayleigh_fading_power) + "/" +
                            format_param(cfg.channel.rayleigh_noise_variance) + ")";
    } else {
        throw ConfigError(kv.where("channel") + ": unknown channel '" + chname + "'");
    }

    // input
    const std::string inname = kv.get_string("input").value_or(
        cfg.channel.is_finite() ? "uniform" : "gaussian");
    if (inname == "uniform") {
        cfg.input.kind = InputSpec::Kind::Uniform;
        if (!cfg.channel.is_finite())
            throw ConfigError("input = uniform requires a finite channel");
    } else if (inname == "pmf") {
        cfg.input.kind = InputSpec::Kind::Pmf;
        cfg.input.pmf = kv.get_double_list("input_pmf");
        if (cfg.input.pmf.empty())
            throw ConfigError("input = pmf requires input_pmf");
    } else if (inname == "gaussian") {
        cfg.input.kind = InputSpec::Kind::Gaussian;
        cfg.input.power = kv.get_double("input_power").value_or(1.0);
        if (!(cfg.input.power > 0.0))
            throw ConfigError(kv.where("input_power") + ": must be positive");
        if (cfg.channel.is_finite())
            throw ConfigError("input = gaussian requires a continuous channel");
    } else {
        throw ConfigError(kv.where("input") + ": unknown input '" + inname + "'");
    }

    // sweep shape
    for (const std::int64_t n : kv.get_int_list("n_list")) {
        if (n < 1) throw ConfigError(kv.where("n_list") + ": entries must be >= 1");
        cfg.n_list.push_back(static_cast<int>(n));
    }
    if (cfg.n_list.empty())
        throw ConfigError("n_list must contain at least one block length");
    cfg.rate_list = kv.get_double_list("rate_list");
    for (const double r : cfg.rate_list)
        if (!(r >= 0.0))
            throw ConfigError(kv.where("rate_list") + ": rates must be >= 0");
    const bool needs_rates = cfg.kind == ExperimentKind::TvSweep ||
                             cfg.kind == ExperimentKind::Concentration ||
                             cfg.kind == ExperimentKind::ConverseAudit ||
                             cfg.kind == ExperimentKind::BoundsTable;
    if (needs_rates && cfg.rate_list.empty())
        throw ConfigError("rate_list must contain at least one rate");

    cfg.epsilon = kv.get_double("epsilon");
    cfg.delta = kv.get_double("delta").value_or(1.0);
    if (!(cfg.delta >= 0.0 && cfg.delta <= 1.0))
        throw ConfigError(kv.where("delta") + ": must lie in [0,1]");
    cfg.xi = kv.get_double("xi").value_or(0.1);
    cfg.c = kv.get_double("c").value_or(2.0);
    cfg.d = kv.get_double("d").value_or(0.5);

    if (kv.has("quantizer_levels")) {
        cfg.quantizer_levels.clear();
        for (const std::int64_t k : kv.get_int_list("quantizer_levels")) {
            if (k < 1)
                throw ConfigError(kv.where("quantizer_levels") + ": entries must be >= 1");
            cfg.quantizer_levels.push_back(static_cast<int>(k));
        }
    }
    cfg.input_grid_levels = static_cast<int>(kv.get_int("input_grid_levels").value_or(64));
    cfg.input_grid_halfwidth = kv.get_double("input_grid_halfwidth").value_or(4.0);
    if (cfg.input_grid_levels < 2)
        throw ConfigError(kv.where("input_grid_levels") + ": must be >= 2");

    cfg.num_codebooks = kv.get_int("num_codebooks").value_or(100);
    cfg.num_mc_samples = kv.get_int("num_mc_samples").value_or(100000);
    if (cfg.num_codebooks < 1)
        throw ConfigError(kv.where("num_codebooks") + ": must be >= 1");
    if (cfg.num_mc_samples < 1)
        throw ConfigError(kv.where("num_mc_samples") + ": must be >= 1");

    cfg.master_seed = kv.require_u64("master_seed"); // no wall-clock seeding

    cfg.out_path = kv.get_string("out").value_or("results.csv");
    const std::string fmt = kv.get_string("format").value_or("csv");
    if (fmt == "csv") cfg.format = OutputFormat::Csv;
    else if (fmt == "json") cfg.format = OutputFormat::Json;
    else throw ConfigError(kv.where("format") + ": expected csv or json");

    cfg.enumeration_cap = kv.get_int("enumeration_cap").value_or(cfg.enumeration_cap);
    cfg.max_codebook_size =
        kv.get_int("max_codebook_size").value_or(cfg.max_codebook_size);
    if (cfg.enumeration_cap < 1 || cfg.max_codebook_size < 1)
        throw ConfigError("caps must be positive");

    cfg.threads = static_cast<int>(kv.get_int("threads").value_or(1));
    if (cfg.threads < 1)
        throw ConfigError(kv.where("threads") + ": must be >= 1");
    cfg.timing = kv.get_flag("timing").value_or(false);

    return cfg;
}

} // namespace resolv
