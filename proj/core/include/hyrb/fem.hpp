#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <functional>
#include <vector>

#include "hyrb/optics.hpp"
#include "hyrb/trimesh.hpp"

namespace hyrb {

/// Boundary source: f(x) = amplitude * exp(-|x - center|^2 / width), with
/// center snapped to the nearest boundary vertex of the mesh in use.
struct SourceSpec {
    double amplitude = 15.0;
    Vec2 center{-24.5196, -4.8773};
    double width = 10.0;
};

/// Wavelength-independent P1 operator pieces for the two-region problem:
///   A(lambda) = D_0*a00 + mu_a^0*a01 + D_1*a10 + mu_a^1*a11,
/// where a00/a10 are region-0/1 stiffness and a01/a11 region-0/1 mass
/// blocks, plus the boundary load F and the H1 Gram matrix X.
struct AffineBlocks {
    Eigen::SparseMatrix<double> a00;
    Eigen::SparseMatrix<double> a01;
    Eigen::SparseMatrix<double> a10;
    Eigen::SparseMatrix<double> a11;
    Eigen::SparseMatrix<double> x_gram;
    Eigen::VectorXd load;

    int n() const { return static_cast<int>(a00.rows()); }
    const Eigen::SparseMatrix<double>& block(int q) const;
};

/// Assemble all four affine blocks, the H1 Gram matrix, and the boundary
/// load for the given source.  Throws on degenerate elements (naming the
/// element index).
AffineBlocks assemble_affine(const TriMesh& mesh, const SourceSpec& source);

/// Boundary load for the Gaussian source (2-point Gauss per boundary edge).
Eigen::VectorXd assemble_load(const TriMesh& mesh, const SourceSpec& source);

/// Generic Neumann-type boundary load for g(position, outward unit normal).
Eigen::VectorXd assemble_boundary_load(
    const TriMesh& mesh, const std::function<double(Vec2, Vec2)>& g);

/// Interior load for a smooth forcing term (3-point edge-midpoint rule).
Eigen::VectorXd assemble_domain_load(const TriMesh& mesh,
                                     const std::function<double(Vec2)>& f);

/// Single-pass assembly of A(lambda) with spatially evaluated coefficients
/// (element-centroid values of d/mu_a): the independent cross-check for the
/// theta-weighted block sum.
Eigen::SparseMatrix<double> assemble_direct(const TriMesh& mesh,
                                            const std::function<double(Vec2)>& d_coeff,
                                            const std::function<double(Vec2)>& mu_coeff);

/// theta-weighted sum of the four blocks.
Eigen::SparseMatrix<double> combine_blocks(const AffineBlocks& blocks, const Theta& theta);

double h1_inner(const AffineBlocks& blocks, const Eigen::VectorXd& u,
                const Eigen::VectorXd& v);
double h1_norm(const AffineBlocks& blocks, const Eigen::VectorXd& u);

/// H1 error of the P1 field against a smooth exact solution, integrated with
/// a degree-5 (7-point) rule per element.
double h1_error_vs_exact(const TriMesh& mesh, const Eigen::VectorXd& coeffs,
                         const std::function<double(Vec2)>& exact,
                         const std::function<Vec2(Vec2)>& exact_grad);

/// Direct sparse SPD solver for the truth problem.  Analyzes the (shared)
/// sparsity pattern once; each solve refactorizes numerically, applies one
/// step of iterative refinement, and verifies the residual against
/// 1e-10*|F|.  Instances are cheap enough to keep per worker thread; they
/// are not safe for concurrent use.
class TruthSolver {
  public:
    explicit TruthSolver(const AffineBlocks& blocks);

    /// A(lambda) assembled on the union sparsity pattern in O(nnz).
    Eigen::SparseMatrix<double> matrix(const Theta& theta) const;

    /// Nodal coefficients of the truth solution for the stored load.
    Eigen::VectorXd solve(const Theta& theta);

    /// Same factorization against a caller-supplied right-hand side.
    Eigen::VectorXd solve(const Theta& theta, const Eigen::VectorXd& rhs);

    const AffineBlocks& blocks() const { return *blocks_; }

  private:
    const AffineBlocks* blocks_;
    Eigen::SparseMatrix<double> pattern_;
    std::array<std::vector<double>, 4> aligned_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

/// Cached Cholesky factorization of the H1 Gram matrix for Riesz
/// representers and dual norms.
class RieszSolver {
  public:
    explicit RieszSolver(const AffineBlocks& blocks);
    Eigen::VectorXd solve(const Eigen::VectorXd& r) const;
    /// sqrt(r^T X^{-1} r), the discrete dual norm of the residual functional.
    double dual_norm(const Eigen::VectorXd& r) const;

  private:
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

}  // namespace hyrb
