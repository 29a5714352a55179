#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyrb/fem.hpp"
#include "hyrb/geometry.hpp"
#include "hyrb/optics.hpp"
#include "hyrb/sampling.hpp"

namespace hyrb {

/// Raised for malformed config files, unknown keys, and out-of-range values.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Full experiment description with the stand-in tissue problem as default.
struct ExperimentConfig {
    Geometry geometry{};
    int mesh_target_elements = 2097;
    std::uint64_t mesh_seed = 1;
    SourceSpec source{};

    std::array<std::pair<double, double>, 5> control_points{
        {{600.0, 0.13}, {700.0, 0.05}, {800.0, 0.03}, {900.0, 0.06}, {1000.0, 0.12}}};
    std::vector<GaussianBump> spikes{{725.0, 0.04, 15.0}, {950.0, 0.06, 20.0}};
    double inclusion_factor = 2.0;
    double inclusion_offset = 0.0;
    double mu_s_prime = 17.0;

    double lambda_min = 600.0;
    double lambda_max = 1000.0;
    double reference_lambda = 800.0;

    int xi_size = 400;
    int upsilon_size = 50;
    int coarse_size = 9;

    std::vector<int> basis_sizes{5, 6, 7, 8, 9, 10, 15, 20};
    int trials = 10;
    int test_points = 100;
    std::uint64_t base_seed = 1234;
    std::vector<std::string> algorithms{"greedy", "gradient", "metropolis", "log_spacing"};
    std::string output_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    bool write_curves = false;

    double greedy_tol = 1e-5;
    GreedyIndicator greedy_indicator = GreedyIndicator::dual_norm;
    double gradient_tol = 1e-7;

    int metropolis_pilot = 500;
    int metropolis_burn_in = 500;
    int metropolis_samples = 2000;
    double metropolis_initial_step = 20.0;

    CoefficientModel make_model() const;
    TrainingMesh make_grids() const;

    /// Cross-field sanity checks; throws ConfigError on the first violation.
    void validate() const;
};

/// Parses `section.key = value` lines ('#' starts a comment).  Unknown keys
/// and malformed values raise ConfigError with the offending line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Command-line overrides applied on top of a parsed file.
struct ConfigOverrides {
    std::optional<std::string> output_dir;
    std::optional<std::vector<std::string>> algorithms;
    std::optional<std::vector<int>> sizes;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};
void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& overrides);

}  // namespace hyrb
