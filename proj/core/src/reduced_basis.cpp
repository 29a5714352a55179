#include "hyrb/reduced_basis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace hyrb {

namespace {
constexpr double kDuplicateTol = 1e-9;
constexpr double kDependenceTol = 1e-10;
}  // namespace

ReducedBasis::ReducedBasis(const AffineBlocks& blocks, const CoefficientModel& model,
                           double reference_lambda)
    : blocks_(&blocks), model_(&model), reference_lambda_(reference_lambda) {
    m_ref_ = combine_blocks(blocks, model.theta(reference_lambda));
    z_.resize(blocks.n(), 0);
    mz_.resize(blocks.n(), 0);
    for (auto& p : phat_) p.resize(0, 0);
    fhat_.resize(0);
}

OrthoResult ReducedBasis::orthonormalized_direction(const Eigen::VectorXd& w) const {
    OrthoResult r;
    Eigen::VectorXd v = w;
    Eigen::VectorXd mv = m_ref_ * v;
    r.pre_norm = std::sqrt(std::max(v.dot(mv), 0.0));
    const int n = size();
    for (int pass = 0; pass < 2 && n > 0; ++pass) {
        const Eigen::VectorXd coeff = mz_.transpose() * v;
        v.noalias() -= z_ * coeff;
    }
    mv.noalias() = m_ref_ * v;
    r.post_norm = std::sqrt(std::max(v.dot(mv), 0.0));
    if (r.post_norm < kDependenceTol * r.pre_norm || !(r.post_norm > 0.0)) {
        r.dependent = true;
        return r;
    }
    r.direction = v / r.post_norm;
    r.m_direction = mv / r.post_norm;
    return r;
}

void ReducedBasis::add_snapshot(TruthSolver& solver, double lambda) {
    for (double s : samples_)
        if (std::abs(s - lambda) < kDuplicateTol)
            throw DuplicateSample("duplicate sample at " + std::to_string(lambda) + " nm");
    add_snapshot_vector(lambda, solver.solve(model_->theta(lambda)));
}

void ReducedBasis::add_snapshot_vector(double lambda, const Eigen::VectorXd& truth) {
    for (double s : samples_)
        if (std::abs(s - lambda) < kDuplicateTol)
            throw DuplicateSample("duplicate sample at " + std::to_string(lambda) + " nm");
    const OrthoResult ortho = orthonormalized_direction(truth);
    if (ortho.dependent)
        throw DependentSnapshot("snapshot at " + std::to_string(lambda) +
                                " nm is linearly dependent on the basis");

    const int n = size();
    z_.conservativeResize(Eigen::NoChange, n + 1);
    z_.col(n) = ortho.direction;
    mz_.conservativeResize(Eigen::NoChange, n + 1);
    mz_.col(n) = ortho.m_direction;

    for (int q = 0; q < 4; ++q) {
        const Eigen::VectorXd y = blocks_->block(q) * ortho.direction;
        Eigen::MatrixXd& p = phat_[q];
        p.conservativeResize(n + 1, n + 1);
        if (n > 0) {
            const Eigen::VectorXd border = z_.leftCols(n).transpose() * y;
            p.block(0, n, n, 1) = border;
            p.block(n, 0, 1, n) = border.transpose();
        }
        p(n, n) = ortho.direction.dot(y);
    }
    fhat_.conservativeResize(n + 1);
    fhat_(n) = blocks_->load.dot(ortho.direction);
    samples_.push_back(lambda);
}

Eigen::MatrixXd ReducedBasis::online_matrix(double lambda) const {
    const auto th = model_->theta(lambda).to_array();
    Eigen::MatrixXd k = th[0] * phat_[0];
    for (int q = 1; q < 4; ++q) k.noalias() += th[q] * phat_[q];
    return k;
}

RBSolution ReducedBasis::online_solve(double lambda) const {
    if (size() == 0) throw std::invalid_argument("online_solve: empty basis");
    const Eigen::MatrixXd k = online_matrix(lambda);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        std::ostringstream ss;
        ss << "projected system at " << lambda << " nm is not SPD (condition estimate "
           << online_condition(lambda) << ")";
        throw SingularOnlineSystem(ss.str());
    }
    return {llt.solve(fhat_), lambda};
}

double ReducedBasis::online_condition(double lambda) const {
    if (size() == 0) throw std::invalid_argument("online_condition: empty basis");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(online_matrix(lambda));
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

Eigen::VectorXd ReducedBasis::reconstruct(const RBSolution& sol) const {
    if (sol.coefficients.size() != size())
        throw std::invalid_argument("reconstruct: coefficient size mismatch");
    return z_ * sol.coefficients;
}

double ReducedBasis::output(const RBSolution& sol) const {
    return fhat_.dot(sol.coefficients);
}

double ReducedBasis::relative_error_vs(const Eigen::VectorXd& truth, double lambda) const {
    if (size() == 0) return 1.0;
    const Eigen::VectorXd diff = truth - reconstruct(online_solve(lambda));
    const double denom = h1_norm(*blocks_, truth);
    if (!(denom > 0.0)) throw std::runtime_error("relative_error: truth solution is zero");
    return h1_norm(*blocks_, diff) / denom;
}

double ReducedBasis::relative_error(TruthSolver& solver, double lambda) const {
    if (size() == 0) return 1.0;
    return relative_error_vs(solver.solve(model_->theta(lambda)), lambda);
}

double ReducedBasis::total_relative_error(TruthSolver& solver,
                                          const std::vector<double>& test_set) const {
    double sum = 0.0;
    for (double l : test_set) sum += relative_error(solver, l);
    return sum;
}

double ReducedBasis::residual_dual_norm(TruthSolver& solver, const RieszSolver& riesz,
                                        double lambda) const {
    if (size() == 0) throw std::invalid_argument("residual_dual_norm: empty basis");
    const Eigen::VectorXd u = reconstruct(online_solve(lambda));
    const Eigen::SparseMatrix<double> a = solver.matrix(model_->theta(lambda));
    const Eigen::VectorXd r = blocks_->load - a * u;
    return riesz.dual_norm(r);
}

double ReducedBasis::gram_deviation() const {
    if (size() == 0) return 0.0;
    Eigen::MatrixXd g = z_.transpose() * mz_;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

void write_error_curve(std::ostream& out, const ReducedBasis& rb, TruthSolver& solver,
                       const RieszSolver& riesz, const std::vector<double>& lambdas) {
    out << "lambda,rel_error,dual_norm\n";
    char buf[128];
    for (double l : lambdas) {
        const double err = rb.relative_error(solver, l);
        const double dual = rb.residual_dual_norm(solver, riesz, l);
        std::snprintf(buf, sizeof buf, "%.6f,%.12e,%.12e\n", l, err, dual);
        out << buf;
    }
}

}  // namespace hyrb
