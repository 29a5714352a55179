#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "hyrb/fem.hpp"
#include "hyrb/optics.hpp"

namespace hyrb {

class DuplicateSample : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DependentSnapshot : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SingularOnlineSystem : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RBSolution {
    Eigen::VectorXd coefficients;
    double lambda = 0.0;
};

struct OrthoResult {
    Eigen::VectorXd direction;   // unit vector in the reference inner product
    Eigen::VectorXd m_direction; // M_ref * direction
    double pre_norm = 0.0;
    double post_norm = 0.0;
    bool dependent = false;
};

/// Galerkin reduced basis for the affinely decomposed problem.  Snapshot
/// directions are kept orthonormal in the energy inner product of the
/// reference wavelength; the projected blocks Z^T A^q Z and load Z^T F are
/// maintained incrementally so online solves never touch truth-space
/// dimensions.  Value semantics; the referenced blocks/model must outlive
/// the basis.
class ReducedBasis {
  public:
    ReducedBasis(const AffineBlocks& blocks, const CoefficientModel& model,
                 double reference_lambda);

    int size() const { return static_cast<int>(samples_.size()); }
    const std::vector<double>& samples() const { return samples_; }
    double reference_lambda() const { return reference_lambda_; }
    const Eigen::MatrixXd& basis() const { return z_; }
    const AffineBlocks& blocks() const { return *blocks_; }
    const CoefficientModel& model() const { return *model_; }
    const Eigen::MatrixXd& projected(int q) const { return phat_[q]; }
    const Eigen::VectorXd& projected_load() const { return fhat_; }

    /// Modified Gram-Schmidt (plus one reorthogonalization pass) of w
    /// against the basis.  dependent is set when the remainder norm drops
    /// below 1e-10 of the input norm.
    OrthoResult orthonormalized_direction(const Eigen::VectorXd& w) const;

    /// Truth solve at lambda, orthonormalize, append, update projections.
    /// Throws DuplicateSample for |lambda - sample| < 1e-9 and
    /// DependentSnapshot when the snapshot adds no new direction.
    void add_snapshot(TruthSolver& solver, double lambda);

    /// Append a precomputed truth solution (same contract as add_snapshot).
    void add_snapshot_vector(double lambda, const Eigen::VectorXd& truth);

    Eigen::MatrixXd online_matrix(double lambda) const;

    /// Solve the projected system; throws SingularOnlineSystem (with a
    /// condition estimate in the message) if it is not SPD.
    RBSolution online_solve(double lambda) const;

    /// Spectral condition number of the projected matrix at lambda.
    double online_condition(double lambda) const;

    Eigen::VectorXd reconstruct(const RBSolution& sol) const;

    /// Compliant output F-hat . c-hat.
    double output(const RBSolution& sol) const;

    /// |u_fe - u_rb|_H1 / |u_fe|_H1 against a supplied truth solution.
    /// Defined as 1.0 for an empty basis.
    double relative_error_vs(const Eigen::VectorXd& truth, double lambda) const;

    /// Convenience overload that performs the truth solve itself.
    double relative_error(TruthSolver& solver, double lambda) const;

    /// Sum of relative errors over a test set.
    double total_relative_error(TruthSolver& solver,
                                const std::vector<double>& test_set) const;

    /// Dual norm of the residual r = F - A(lambda) Z c-hat, via one Riesz
    /// solve with the H1 Gram matrix.  Requires a non-empty basis.
    double residual_dual_norm(TruthSolver& solver, const RieszSolver& riesz,
                              double lambda) const;

    /// max |Z^T M_ref Z - I|: orthonormality drift.
    double gram_deviation() const;

  private:
    const AffineBlocks* blocks_;
    const CoefficientModel* model_;
    double reference_lambda_;
    Eigen::SparseMatrix<double> m_ref_;
    std::vector<double> samples_;
    Eigen::MatrixXd z_;    // truth-space basis columns
    Eigen::MatrixXd mz_;   // M_ref * Z
    std::array<Eigen::MatrixXd, 4> phat_;
    Eigen::VectorXd fhat_;
};

/// CSV dump (columns lambda,rel_error,dual_norm) of the per-wavelength error
/// curve of a basis over a wavelength grid.
void write_error_curve(std::ostream& out, const ReducedBasis& rb, TruthSolver& solver,
                       const RieszSolver& riesz, const std::vector<double>& lambdas);

}  // namespace hyrb
