#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyrb/config.hpp"

namespace hyrb {

/// Raised when the configured model or mesh violates a structural invariant
/// (as opposed to a malformed config, which raises ConfigError).
class InvariantViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One (algorithm, basis size, trial) cell of the study.
struct CellRecord {
    std::string algorithm;
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double total_relative_error = std::numeric_limits<double>::quiet_NaN();
    double selection_seconds = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> lambdas;
    std::vector<std::string> warnings;
    std::string error;  // non-empty when the cell failed
};

struct SummaryRow {
    std::string algorithm;
    int n = 0;
    double mean_error = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double mean_seconds = std::numeric_limits<double>::quiet_NaN();
    double std_seconds = std::numeric_limits<double>::quiet_NaN();
    int successes = 0;
};

struct ExperimentResult {
    std::vector<CellRecord> records;
    std::vector<SummaryRow> summary;
    std::string output_dir;
};

/// Runs the full study: mesh + affine assembly once, then every
/// (algorithm, size, trial) cell on a worker pool.  Selection is timed per
/// cell (including any truth caching a selector needs); accuracy is scored
/// afterwards against a shared test-set truth cache.  Writes results.csv,
/// summary.csv, the two overview plots, and failures.log when cells failed.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Per-(algorithm, n) means/sample-stddevs over the successful trials.
std::vector<SummaryRow> summarize(const std::vector<CellRecord>& records);

void write_results_csv(std::ostream& out, const std::vector<CellRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::fail;
    std::string detail;
};

/// Self-checks of the configured problem: optics admissibility, mesh
/// integrity, affine/direct assembly agreement, solver residuals, basis
/// orthonormality and reproduction, error-bound validity, mesh-refinement
/// convergence, and selector determinism.
std::vector<CheckResult> validate_suite(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace hyrb
