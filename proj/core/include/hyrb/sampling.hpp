#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hyrb/fem.hpp"
#include "hyrb/optics.hpp"
#include "hyrb/reduced_basis.hpp"

namespace hyrb {

/// Wavelength grids used by the selectors: xi is the dense candidate grid
/// for the greedy indicator sweep, upsilon carries the summed-error
/// objective, coarse seeds the descent starts.
struct TrainingMesh {
    std::vector<double> xi;
    std::vector<double> upsilon;
    std::vector<double> coarse;
};

std::vector<double> linspace(double lo, double hi, int n);

/// Equally spaced grids; enforces |xi| >= |upsilon| >= |coarse| >= 2.
TrainingMesh make_training_mesh(double lambda_min, double lambda_max, int xi_size,
                                int upsilon_size, int coarse_size);

struct StoppingRule {
    int n_max = 10;
    double tol_min = 0.0;
};

enum class GreedyIndicator { dual_norm, output_bound };

struct GradientOptions {
    double fd_step = 0.5;       // nm, half width of the difference stencil
    double armijo_init = 10.0;  // nm
    double armijo_shrink = 0.5;
    double armijo_c = 1e-4;
    double grad_tol = 1e-8;
    double min_step = 1e-3;     // nm
    int max_descent = 50;
};

struct MetropolisConfig {
    int n_target = 5;
    int pilot = 500;
    int burn_in = 500;
    int samples = 2000;
    double initial_step = 20.0;  // nm, isotropic proposal stddev for the pilot
    std::uint64_t seed = 0;
};

struct SelectionResult {
    std::vector<double> samples;
    std::vector<double> indicator_history;
    double wall_seconds = 0.0;
    int iterations = 0;
    double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

struct ProblemRefs {
    const AffineBlocks& blocks;
    const CoefficientModel& model;
    double reference_lambda;
};

/// Weak greedy sweep: random seeded first sample, then argmax of the error
/// indicator over xi until tol_min or n_max.  Ties break toward the smaller
/// wavelength; duplicate/dependent picks are excluded and logged.
SelectionResult greedy_select(const ProblemRefs& prob, const TrainingMesh& grids,
                              const StoppingRule& stop, GreedyIndicator indicator,
                              std::uint64_t seed);

/// Descent on the one-snapshot-augmented summed error: coarse-grid start
/// (never the previous iteration's start), finite-difference slope, Armijo
/// backtracking, candidates clamped to the band.
SelectionResult gradient_select(const ProblemRefs& prob, const TrainingMesh& grids,
                                const StoppingRule& stop, std::uint64_t seed,
                                const GradientOptions& opts = {});

/// Random-walk Metropolis over sorted wavelength vectors with posterior
/// exp(-sum of relative errors); isotropic pilot phase, then a frozen
/// scaled-covariance proposal; returns the componentwise posterior mean.
SelectionResult metropolis_select(const ProblemRefs& prob, const TrainingMesh& grids,
                                  const MetropolisConfig& cfg);

/// n wavelengths clustered logarithmically toward lambda_min:
/// ln(sigma_bar (l_k - lambda_min) + 1) is linearly spaced, l_1 = lambda_min,
/// l_n = lambda_max.  n = 1 yields {lambda_min}.
std::vector<double> log_spacing(double lambda_min, double lambda_max, int n,
                                double sigma_bar = 5.5e4);

}  // namespace hyrb
