#include "hyrb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace hyrb {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct RawValue {
    std::string text;
    int line = 0;
    bool consumed = false;
};

using RawMap = std::map<std::string, RawValue>;

[[noreturn]] void fail(const RawValue& v, const std::string& key, const std::string& what) {
    throw ConfigError("config line " + std::to_string(v.line) + ": " + key + ": " + what);
}

double parse_double(const RawValue& v, const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') fail(v, key, "expected a number, got '" + text + "'");
    return x;
}

long long parse_int(const RawValue& v, const std::string& key, const std::string& text) {
    char* end = nullptr;
    const long long x = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0') fail(v, key, "expected an integer, got '" + text + "'");
    return x;
}

std::vector<std::string> split_items(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

std::vector<std::string> split_colon(const std::string& item) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : item) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

class Reader {
  public:
    explicit Reader(RawMap& raw) : raw_(&raw) {}

    template <typename F>
    void with(const std::string& key, F&& set) {
        auto it = raw_->find(key);
        if (it == raw_->end()) return;
        it->second.consumed = true;
        set(it->second);
    }

    void number(const std::string& key, double& out) {
        with(key, [&](RawValue& v) { out = parse_double(v, key, v.text); });
    }

    void integer(const std::string& key, int& out) {
        with(key, [&](RawValue& v) {
            const long long x = parse_int(v, key, v.text);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                fail(v, key, "integer out of range");
            out = static_cast<int>(x);
        });
    }

    void seed(const std::string& key, std::uint64_t& out) {
        with(key, [&](RawValue& v) {
            const long long x = parse_int(v, key, v.text);
            if (x < 0) fail(v, key, "seed must be non-negative");
            out = static_cast<std::uint64_t>(x);
        });
    }

    void boolean(const std::string& key, bool& out) {
        with(key, [&](RawValue& v) {
            if (v.text == "true" || v.text == "1") out = true;
            else if (v.text == "false" || v.text == "0") out = false;
            else fail(v, key, "expected true/false");
        });
    }

    void text(const std::string& key, std::string& out) {
        with(key, [&](RawValue& v) {
            if (v.text.empty()) fail(v, key, "value must not be empty");
            out = v.text;
        });
    }

  private:
    RawMap* raw_;
};

}  // namespace

CoefficientModel ExperimentConfig::make_model() const {
    return CoefficientModel(control_points, spikes, inclusion_factor, inclusion_offset,
                            mu_s_prime, lambda_min, lambda_max);
}

TrainingMesh ExperimentConfig::make_grids() const {
    return make_training_mesh(lambda_min, lambda_max, xi_size, upsilon_size, coarse_size);
}

void ExperimentConfig::validate() const {
    try {
        geometry.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }
    if (mesh_target_elements < 50) throw ConfigError("mesh.target_elements must be >= 50");
    if (!(lambda_max > lambda_min)) throw ConfigError("space.lambda_max must exceed space.lambda_min");
    if (reference_lambda < lambda_min || reference_lambda > lambda_max)
        throw ConfigError("rb.reference_lambda must lie inside the wavelength band");
    if (coarse_size < 2 || upsilon_size < coarse_size || xi_size < upsilon_size)
        throw ConfigError("training grids must satisfy xi >= upsilon >= coarse >= 2");
    if (basis_sizes.empty()) throw ConfigError("experiment.sizes must not be empty");
    for (int nsize : basis_sizes)
        if (nsize < 1) throw ConfigError("experiment.sizes entries must be >= 1");
    if (trials < 1) throw ConfigError("experiment.trials must be >= 1");
    if (test_points < 2) throw ConfigError("experiment.test_points must be >= 2");
    if (algorithms.empty()) throw ConfigError("experiment.algorithms must not be empty");
    for (const std::string& a : algorithms)
        if (a != "greedy" && a != "gradient" && a != "metropolis" && a != "log_spacing")
            throw ConfigError("unknown algorithm '" + a + "'");
    if (threads < 0) throw ConfigError("experiment.threads must be >= 0");
    if (greedy_tol < 0.0 || gradient_tol < 0.0) throw ConfigError("tolerances must be >= 0");
    if (metropolis_pilot < 0 || metropolis_burn_in < 0 || metropolis_samples < 1)
        throw ConfigError("metropolis phases must be non-negative and samples >= 1");
    if (!(metropolis_initial_step > 0.0)) throw ConfigError("metropolis.initial_step must be positive");
    if (!(mu_s_prime > 0.0)) throw ConfigError("optics.mu_s_prime must be positive");
    if (!(source.width > 0.0)) throw ConfigError("source.width must be positive");
}

ExperimentConfig parse_config(std::istream& in) {
    RawMap raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'section.key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": keys must look like 'section.key'");
        if (raw.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "' (first set on line " + std::to_string(raw[key].line) + ")");
        raw[key] = RawValue{value, lineno, false};
    }

    ExperimentConfig cfg;
    Reader r(raw);

    r.number("geometry.outer_radius", cfg.geometry.outer_radius);
    r.number("geometry.inclusion_x", cfg.geometry.inclusion_center.x);
    r.number("geometry.inclusion_y", cfg.geometry.inclusion_center.y);
    r.number("geometry.inclusion_radius", cfg.geometry.inclusion_radius);

    r.integer("mesh.target_elements", cfg.mesh_target_elements);
    r.seed("mesh.seed", cfg.mesh_seed);

    r.number("source.amplitude", cfg.source.amplitude);
    r.number("source.x", cfg.source.center.x);
    r.number("source.y", cfg.source.center.y);
    r.number("source.width", cfg.source.width);

    r.with("optics.control_points", [&](RawValue& v) {
        const auto items = split_items(v.text);
        if (items.size() != 5)
            fail(v, "optics.control_points", "expected exactly 5 'wavelength:value' pairs");
        for (std::size_t i = 0; i < 5; ++i) {
            const auto parts = split_colon(items[i]);
            if (parts.size() != 2)
                fail(v, "optics.control_points", "entry '" + items[i] + "' is not 'wavelength:value'");
            cfg.control_points[i] = {parse_double(v, "optics.control_points", parts[0]),
                                     parse_double(v, "optics.control_points", parts[1])};
        }
    });
    r.with("optics.spikes", [&](RawValue& v) {
        cfg.spikes.clear();
        for (const std::string& item : split_items(v.text)) {
            const auto parts = split_colon(item);
            if (parts.size() != 3)
                fail(v, "optics.spikes", "entry '" + item + "' is not 'center:amplitude:stddev'");
            cfg.spikes.push_back({parse_double(v, "optics.spikes", parts[0]),
                                  parse_double(v, "optics.spikes", parts[1]),
                                  parse_double(v, "optics.spikes", parts[2])});
        }
    });
    r.number("optics.inclusion_factor", cfg.inclusion_factor);
    r.number("optics.inclusion_offset", cfg.inclusion_offset);
    r.number("optics.mu_s_prime", cfg.mu_s_prime);

    r.number("space.lambda_min", cfg.lambda_min);
    r.number("space.lambda_max", cfg.lambda_max);
    r.number("rb.reference_lambda", cfg.reference_lambda);

    r.integer("training.xi", cfg.xi_size);
    r.integer("training.upsilon", cfg.upsilon_size);
    r.integer("training.coarse", cfg.coarse_size);

    r.with("experiment.sizes", [&](RawValue& v) {
        cfg.basis_sizes.clear();
        for (const std::string& item : split_items(v.text)) {
            const long long x = parse_int(v, "experiment.sizes", item);
            if (x < 1) fail(v, "experiment.sizes", "sizes must be >= 1");
            cfg.basis_sizes.push_back(static_cast<int>(x));
        }
        if (cfg.basis_sizes.empty()) fail(v, "experiment.sizes", "list must not be empty");
    });
    r.integer("experiment.trials", cfg.trials);
    r.integer("experiment.test_points", cfg.test_points);
    r.seed("experiment.seed", cfg.base_seed);
    r.with("experiment.algorithms", [&](RawValue& v) {
        cfg.algorithms = split_items(v.text);
        if (cfg.algorithms.empty()) fail(v, "experiment.algorithms", "list must not be empty");
    });
    r.text("experiment.output_dir", cfg.output_dir);
    r.integer("experiment.threads", cfg.threads);
    r.boolean("experiment.write_curves", cfg.write_curves);

    r.number("greedy.tol", cfg.greedy_tol);
    r.with("greedy.indicator", [&](RawValue& v) {
        if (v.text == "dual_norm") cfg.greedy_indicator = GreedyIndicator::dual_norm;
        else if (v.text == "output_bound") cfg.greedy_indicator = GreedyIndicator::output_bound;
        else fail(v, "greedy.indicator", "expected dual_norm or output_bound");
    });
    r.number("gradient.tol", cfg.gradient_tol);

    r.integer("metropolis.pilot", cfg.metropolis_pilot);
    r.integer("metropolis.burn_in", cfg.metropolis_burn_in);
    r.integer("metropolis.samples", cfg.metropolis_samples);
    r.number("metropolis.initial_step", cfg.metropolis_initial_step);

    for (const auto& [key, value] : raw)
        if (!value.consumed)
            throw ConfigError("config line " + std::to_string(value.line) + ": unknown key '" +
                              key + "'");

    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& overrides) {
    if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
    if (overrides.algorithms) cfg.algorithms = *overrides.algorithms;
    if (overrides.sizes) cfg.basis_sizes = *overrides.sizes;
    if (overrides.seed) cfg.base_seed = *overrides.seed;
    if (overrides.threads) cfg.threads = *overrides.threads;
    cfg.validate();
}

}  // namespace hyrb
