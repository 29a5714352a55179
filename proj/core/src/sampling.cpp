#include "hyrb/sampling.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace hyrb {
namespace {

constexpr double kPi = 3.14159265358979323846;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller standard normals.  Pinned implementation so seeded chains are
/// reproducible across standard libraries.
class NormalDraw {
  public:
    explicit NormalDraw(std::mt19937_64& rng) : rng_(&rng) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - u01(*rng_);  // (0, 1], keeps log finite
        const double u2 = u01(*rng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

  private:
    std::mt19937_64* rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::string format_lambda(double lambda) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", lambda);
    return buf;
}

/// Summed/max relative H1 error of a reduced basis over the upsilon grid,
/// evaluated through cached Gram data instead of full-order reconstructions:
///   err^2 = |u|_X^2 - 2 c.(Z^T X u) + c.(Z^T X Z) c.
/// Truth solutions at the grid are solved once up front.  The cache follows
/// one basis at a time via attach/notify_added; evaluate_augmented prices a
/// tentative extra snapshot through a bordered online system without copying
/// the basis.
class SpanObjective {
  public:
    struct Cost {
        double sum = 0.0;
        double max = 0.0;
    };

    SpanObjective(const ProblemRefs& prob, const std::vector<double>& upsilon,
                  TruthSolver& solver, bool memoize_truth)
        : prob_(&prob), solver_(&solver), memoize_(memoize_truth) {
        if (upsilon.empty()) throw std::invalid_argument("objective grid is empty");
        const auto& x = prob.blocks.x_gram;
        const auto n = static_cast<Eigen::Index>(x.rows());
        xu_.resize(n, static_cast<Eigen::Index>(upsilon.size()));
        thetas_.reserve(upsilon.size());
        norm2_.reserve(upsilon.size());
        for (std::size_t j = 0; j < upsilon.size(); ++j) {
            thetas_.push_back(prob.model.theta(upsilon[j]));
            const Eigen::VectorXd u = solver.solve(thetas_.back());
            xu_.col(static_cast<Eigen::Index>(j)) = x * u;
            norm2_.push_back(u.dot(xu_.col(static_cast<Eigen::Index>(j))));
        }
    }

    /// Rebuild the cached projections for rb's current basis.
    void attach(const ReducedBasis& rb) {
        const Eigen::MatrixXd& z = rb.basis();
        const Eigen::Index n = z.cols();
        xz_.resize(z.rows(), n);
        for (Eigen::Index k = 0; k < n; ++k) xz_.col(k) = prob_->blocks.x_gram * z.col(k);
        gram_ = z.transpose() * xz_;
        proj_truth_ = z.transpose() * xu_;
        cached_n_ = static_cast<int>(n);
    }

    /// Extend the cache after rb gained exactly one snapshot.
    void notify_added(const ReducedBasis& rb) {
        const Eigen::MatrixXd& z = rb.basis();
        if (z.cols() != cached_n_ + 1) {
            attach(rb);
            return;
        }
        const Eigen::Index n = z.cols();
        const Eigen::VectorXd zeta = z.col(n - 1);
        const Eigen::VectorXd xzeta = prob_->blocks.x_gram * zeta;
        xz_.conservativeResize(Eigen::NoChange, n);
        xz_.col(n - 1) = xzeta;
        gram_.conservativeResize(n, n);
        gram_.block(0, n - 1, n - 1, 1) = z.leftCols(n - 1).transpose() * xzeta;
        gram_.block(n - 1, 0, 1, n - 1) = gram_.block(0, n - 1, n - 1, 1).transpose();
        gram_(n - 1, n - 1) = zeta.dot(xzeta);
        proj_truth_.conservativeResize(n, Eigen::NoChange);
        proj_truth_.row(n - 1) = zeta.transpose() * xu_;
        cached_n_ = static_cast<int>(n);
    }

    /// Errors of the attached basis over upsilon.
    Cost evaluate(const ReducedBasis& rb) const {
        if (rb.size() != cached_n_)
            throw std::logic_error("objective cache out of sync with basis");
        Cost cost;
        const int n = cached_n_;
        for (std::size_t j = 0; j < thetas_.size(); ++j) {
            double rel = 1.0;
            if (n > 0) {
                Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
                const auto th = thetas_[j].to_array();
                for (int q = 0; q < 4; ++q) a += th[static_cast<std::size_t>(q)] * rb.projected(q);
                Eigen::LLT<Eigen::MatrixXd> llt(a);
                if (llt.info() != Eigen::Success)
                    throw SingularOnlineSystem("online system not positive definite in objective");
                const Eigen::VectorXd c = llt.solve(rb.projected_load());
                rel = relative_from_coeffs(c, proj_truth_.col(static_cast<Eigen::Index>(j)),
                                           gram_, norm2_[j]);
            }
            cost.sum += rel;
            cost.max = std::max(cost.max, rel);
        }
        return cost;
    }

    /// Errors of span(basis + snapshot at mu) via a bordered online system.
    /// Falls back to evaluate(rb) when the snapshot is numerically dependent.
    Cost evaluate_augmented(const ReducedBasis& rb, double mu) {
        if (rb.size() != cached_n_)
            throw std::logic_error("objective cache out of sync with basis");
        const Eigen::VectorXd& w = truth_at(mu);
        const OrthoResult ortho = rb.orthonormalized_direction(w);
        if (ortho.dependent) return evaluate(rb);

        const int n = cached_n_;
        const Eigen::VectorXd& zeta = ortho.direction;
        const Eigen::VectorXd xzeta = prob_->blocks.x_gram * zeta;

        Eigen::MatrixXd gram(n + 1, n + 1);
        gram.topLeftCorner(n, n) = gram_;
        if (n > 0) {
            gram.block(0, n, n, 1) = xz_.transpose() * zeta;
            gram.block(n, 0, 1, n) = gram.block(0, n, n, 1).transpose();
        }
        gram(n, n) = zeta.dot(xzeta);

        std::array<Eigen::VectorXd, 4> border;
        std::array<double, 4> corner{};
        for (int q = 0; q < 4; ++q) {
            const Eigen::VectorXd y = prob_->blocks.block(q) * zeta;
            border[static_cast<std::size_t>(q)] = rb.basis().transpose() * y;
            corner[static_cast<std::size_t>(q)] = zeta.dot(y);
        }
        Eigen::VectorXd load(n + 1);
        load.head(n) = rb.projected_load();
        load(n) = prob_->blocks.load.dot(zeta);

        Cost cost;
        Eigen::MatrixXd a(n + 1, n + 1);
        for (std::size_t j = 0; j < thetas_.size(); ++j) {
            const auto th = thetas_[j].to_array();
            a.setZero();
            for (int q = 0; q < 4; ++q) {
                const double t = th[static_cast<std::size_t>(q)];
                a.topLeftCorner(n, n) += t * rb.projected(q);
                a.block(0, n, n, 1) += t * border[static_cast<std::size_t>(q)];
                a(n, n) += t * corner[static_cast<std::size_t>(q)];
            }
            a.block(n, 0, 1, n) = a.block(0, n, n, 1).transpose();
            Eigen::LLT<Eigen::MatrixXd> llt(a);
            if (llt.info() != Eigen::Success)
                throw SingularOnlineSystem("augmented online system not positive definite");
            const Eigen::VectorXd c = llt.solve(load);
            Eigen::VectorXd proj(n + 1);
            proj.head(n) = proj_truth_.col(static_cast<Eigen::Index>(j));
            proj(n) = zeta.dot(xu_.col(static_cast<Eigen::Index>(j)));
            const double rel = relative_from_coeffs(c, proj, gram, norm2_[j]);
            cost.sum += rel;
            cost.max = std::max(cost.max, rel);
        }
        return cost;
    }

    const Eigen::VectorXd& truth_at(double lambda) {
        if (!memoize_) {
            scratch_truth_ = solver_->solve(prob_->model.theta(lambda));
            return scratch_truth_;
        }
        const auto key = std::bit_cast<std::uint64_t>(lambda);
        auto it = memo_.find(key);
        if (it == memo_.end())
            it = memo_.emplace(key, solver_->solve(prob_->model.theta(lambda))).first;
        return it->second;
    }

  private:
    static double relative_from_coeffs(const Eigen::VectorXd& c, const Eigen::VectorXd& proj,
                                       const Eigen::MatrixXd& gram, double truth_norm2) {
        const double err2 = truth_norm2 - 2.0 * c.dot(proj) + c.dot(gram * c);
        if (truth_norm2 <= 0.0)
            throw std::runtime_error("objective: solution has zero norm");
        return std::sqrt(std::max(err2, 0.0) / truth_norm2);
    }

    const ProblemRefs* prob_;
    TruthSolver* solver_;
    bool memoize_;
    std::vector<Theta> thetas_;
    std::vector<double> norm2_;
    Eigen::MatrixXd xu_;          // columns X u_j over upsilon
    Eigen::MatrixXd xz_;          // X Z for the attached basis
    Eigen::MatrixXd gram_;        // Z^T X Z
    Eigen::MatrixXd proj_truth_;  // Z^T X u_j, one column per grid point
    int cached_n_ = 0;
    Eigen::VectorXd scratch_truth_;
    std::unordered_map<std::uint64_t, Eigen::VectorXd> memo_;
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void check_grids(const TrainingMesh& grids, bool need_upsilon, bool need_coarse) {
    if (grids.xi.empty()) throw std::invalid_argument("candidate grid xi is empty");
    if (need_upsilon && grids.upsilon.empty())
        throw std::invalid_argument("objective grid upsilon is empty");
    if (need_coarse && grids.coarse.empty())
        throw std::invalid_argument("coarse start grid is empty");
}

bool near_existing_sample(const ReducedBasis& rb, double lambda, double tol) {
    for (double s : rb.samples())
        if (std::abs(s - lambda) < tol) return true;
    return false;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    out.back() = hi;
    return out;
}

TrainingMesh make_training_mesh(double lambda_min, double lambda_max, int xi_size,
                                int upsilon_size, int coarse_size) {
    if (!(lambda_max > lambda_min))
        throw std::invalid_argument("training mesh: lambda_max must exceed lambda_min");
    if (coarse_size < 2) throw std::invalid_argument("training mesh: coarse grid needs >= 2 points");
    if (upsilon_size < coarse_size)
        throw std::invalid_argument("training mesh: upsilon must be at least as fine as coarse");
    if (xi_size < upsilon_size)
        throw std::invalid_argument("training mesh: xi must be at least as fine as upsilon");
    TrainingMesh grids;
    grids.xi = linspace(lambda_min, lambda_max, xi_size);
    grids.upsilon = linspace(lambda_min, lambda_max, upsilon_size);
    grids.coarse = linspace(lambda_min, lambda_max, coarse_size);
    return grids;
}

SelectionResult greedy_select(const ProblemRefs& prob, const TrainingMesh& grids,
                              const StoppingRule& stop, GreedyIndicator indicator,
                              std::uint64_t seed) {
    check_grids(grids, false, false);
    if (stop.n_max < 1) throw std::invalid_argument("greedy: n_max must be >= 1");
    const Stopwatch watch;
    SelectionResult res;

    TruthSolver solver(prob.blocks);
    RieszSolver riesz(prob.blocks);
    ReducedBasis rb(prob.blocks, prob.model, prob.reference_lambda);

    std::mt19937_64 rng(seed);
    const std::size_t first = static_cast<std::size_t>(rng() % grids.xi.size());
    rb.add_snapshot(solver, grids.xi[first]);

    std::vector<char> active(grids.xi.size(), 1);
    const auto indicator_at = [&](double lambda) -> double {
        const double eps = rb.residual_dual_norm(solver, riesz, lambda);
        if (indicator == GreedyIndicator::dual_norm) return eps;
        const RBSolution sol = rb.online_solve(lambda);
        const double s = rb.output(sol);
        if (!(s > 0.0)) throw std::runtime_error("output is not positive at lambda=" + format_lambda(lambda));
        return eps * eps / (prob.model.min_theta(lambda) * s);
    };

    // Each pass either grows the basis or retires a candidate, so the loop is
    // bounded even when picks keep getting excluded.
    while (rb.size() < stop.n_max) {
        double best = -1.0;
        std::ptrdiff_t arg = -1;
        for (std::size_t i = 0; i < grids.xi.size(); ++i) {
            if (!active[i]) continue;
            double value;
            try {
                value = indicator_at(grids.xi[i]);
            } catch (const std::exception& e) {
                active[i] = 0;
                res.warnings.push_back(std::string("greedy: excluded lambda=") +
                                       format_lambda(grids.xi[i]) + " (" + e.what() + ")");
                continue;
            }
            if (value > best) {  // strict: ties keep the smaller wavelength
                best = value;
                arg = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (arg < 0) {
            res.warnings.push_back("greedy: no admissible candidates remain");
            break;
        }
        res.indicator_history.push_back(best);
        if (best <= stop.tol_min) break;
        try {
            rb.add_snapshot(solver, grids.xi[static_cast<std::size_t>(arg)]);
        } catch (const DuplicateSample& e) {
            active[static_cast<std::size_t>(arg)] = 0;
            res.warnings.push_back(std::string("greedy: ") + e.what());
        } catch (const DependentSnapshot& e) {
            active[static_cast<std::size_t>(arg)] = 0;
            res.warnings.push_back(std::string("greedy: ") + e.what());
        }
    }

    res.samples = rb.samples();
    res.iterations = static_cast<int>(res.indicator_history.size());
    res.wall_seconds = watch.seconds();
    return res;
}

SelectionResult gradient_select(const ProblemRefs& prob, const TrainingMesh& grids,
                                const StoppingRule& stop, std::uint64_t seed,
                                const GradientOptions& opts) {
    check_grids(grids, true, true);
    if (stop.n_max < 1) throw std::invalid_argument("gradient: n_max must be >= 1");
    if (!(opts.fd_step > 0.0) || !(opts.armijo_init > 0.0) || opts.max_descent < 1)
        throw std::invalid_argument("gradient: invalid descent options");
    const Stopwatch watch;
    SelectionResult res;

    TruthSolver solver(prob.blocks);
    ReducedBasis rb(prob.blocks, prob.model, prob.reference_lambda);
    SpanObjective obj(prob, grids.upsilon, solver, /*memoize_truth=*/true);

    std::mt19937_64 rng(seed);
    rb.add_snapshot(solver, grids.xi[static_cast<std::size_t>(rng() % grids.xi.size())]);
    obj.attach(rb);

    const double lo = prob.model.lambda_min();
    const double hi = prob.model.lambda_max();
    const double dup_tol = 1e-6;
    const double nudge = grids.upsilon.size() > 1 ? grids.upsilon[1] - grids.upsilon[0] : 1.0;

    // J(mu) = summed relative error of span(basis + snapshot(mu)) over upsilon.
    const auto j_of = [&](double mu) { return obj.evaluate_augmented(rb, mu).sum; };

    double previous_start = std::numeric_limits<double>::quiet_NaN();
    for (int k = 2; k <= stop.n_max; ++k) {
        const SpanObjective::Cost current = obj.evaluate(rb);
        res.indicator_history.push_back(current.max);
        if (current.max <= stop.tol_min) break;

        double start = std::numeric_limits<double>::quiet_NaN();
        double start_j = std::numeric_limits<double>::infinity();
        for (double l : grids.coarse) {
            if (l == previous_start) continue;
            const double j = j_of(l);
            if (j < start_j) {
                start_j = j;
                start = l;
            }
        }
        if (!std::isfinite(start_j)) {
            res.warnings.push_back("gradient: no admissible coarse start");
            break;
        }
        previous_start = start;

        // Projected descent with a finite-difference slope.  At a clamp
        // boundary the stencil is one-sided.
        double x = start;
        double fx = start_j;
        for (int iter = 0; iter < opts.max_descent; ++iter) {
            const double xp = std::min(x + opts.fd_step, hi);
            const double xm = std::max(x - opts.fd_step, lo);
            if (xp == xm) break;
            const double g = (j_of(xp) - j_of(xm)) / (xp - xm);
            if (std::abs(g) <= opts.grad_tol) break;
            double step = opts.armijo_init;
            bool moved = false;
            while (step >= opts.min_step) {
                const double xn = std::clamp(x - step * (g > 0.0 ? 1.0 : -1.0), lo, hi);
                if (xn == x) break;
                const double fn = j_of(xn);
                if (fn <= fx - opts.armijo_c * std::abs(g) * std::abs(x - xn)) {
                    x = xn;
                    fx = fn;
                    moved = true;
                    break;
                }
                step *= opts.armijo_shrink;
            }
            if (!moved) break;
        }

        double mu = x;
        if (near_existing_sample(rb, mu, dup_tol)) {
            const double shifted = std::clamp(mu + nudge, lo, hi);
            if (near_existing_sample(rb, shifted, dup_tol)) {
                res.warnings.push_back("gradient: descent landed on an existing sample at lambda=" +
                                       format_lambda(mu) + "; iteration skipped");
                continue;
            }
            res.warnings.push_back("gradient: nudged duplicate pick at lambda=" + format_lambda(mu));
            mu = shifted;
        }
        try {
            rb.add_snapshot(solver, mu);
            obj.notify_added(rb);
        } catch (const DuplicateSample& e) {
            res.warnings.push_back(std::string("gradient: ") + e.what());
        } catch (const DependentSnapshot& e) {
            res.warnings.push_back(std::string("gradient: ") + e.what());
        }
    }

    res.samples = rb.samples();
    res.iterations = static_cast<int>(res.indicator_history.size());
    res.wall_seconds = watch.seconds();
    return res;
}

SelectionResult metropolis_select(const ProblemRefs& prob, const TrainingMesh& grids,
                                  const MetropolisConfig& cfg) {
    check_grids(grids, true, false);
    const int n = cfg.n_target;
    if (n < 1) throw std::invalid_argument("metropolis: n_target must be >= 1");
    if (static_cast<std::size_t>(n) > grids.upsilon.size())
        throw std::invalid_argument("metropolis: n_target exceeds the objective grid size");
    if (cfg.pilot < 0 || cfg.burn_in < 0 || cfg.samples < 1)
        throw std::invalid_argument("metropolis: phase lengths must be non-negative, samples >= 1");
    if (!(cfg.initial_step > 0.0)) throw std::invalid_argument("metropolis: initial_step must be positive");
    const Stopwatch watch;
    SelectionResult res;

    TruthSolver solver(prob.blocks);
    SpanObjective obj(prob, grids.upsilon, solver, /*memoize_truth=*/false);

    const double lo = prob.model.lambda_min();
    const double hi = prob.model.lambda_max();

    const auto in_support = [&](const Eigen::VectorXd& s) {
        if (s(0) < lo || s(n - 1) > hi) return false;
        for (int i = 0; i + 1 < n; ++i)
            if (!(s(i) < s(i + 1))) return false;
        return true;
    };
    const auto log_posterior = [&](const Eigen::VectorXd& s) -> double {
        ReducedBasis rb(prob.blocks, prob.model, prob.reference_lambda);
        for (int i = 0; i < n; ++i) {
            try {
                rb.add_snapshot(solver, s(i));
            } catch (const DuplicateSample&) {
            } catch (const DependentSnapshot&) {
            }
        }
        if (rb.size() == 0) return -std::numeric_limits<double>::infinity();
        try {
            obj.attach(rb);
            return -obj.evaluate(rb).sum;
        } catch (const SingularOnlineSystem&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    Eigen::VectorXd state(n);
    for (int i = 0; i < n; ++i)
        state(i) = lo + (hi - lo) * static_cast<double>(i + 1) / (n + 1);
    double state_lp = log_posterior(state);
    if (!std::isfinite(state_lp))
        throw std::runtime_error("metropolis: initial state has zero posterior mass");

    std::mt19937_64 rng(cfg.seed);
    NormalDraw normal(rng);
    Eigen::MatrixXd proposal_l = cfg.initial_step * Eigen::MatrixXd::Identity(n, n);

    const auto step_chain = [&]() -> bool {
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z(i) = normal();
        const Eigen::VectorXd candidate = state + proposal_l * z;
        if (!in_support(candidate)) return false;
        const double lp = log_posterior(candidate);
        if (!std::isfinite(lp)) return false;
        if (lp < state_lp && u01(rng) >= std::exp(lp - state_lp)) return false;
        state = candidate;
        state_lp = lp;
        return true;
    };

    Eigen::MatrixXd pilot_states;
    if (cfg.pilot > 0) {
        pilot_states.resize(n, cfg.pilot);
        for (int i = 0; i < cfg.pilot; ++i) {
            step_chain();
            pilot_states.col(i) = state;
        }
        // Freeze the proposal at the scaled pilot covariance (plus a jitter
        // floor so degenerate pilots stay usable).
        const Eigen::VectorXd mean = pilot_states.rowwise().mean();
        const Eigen::MatrixXd centered = pilot_states.colwise() - mean;
        const double denom = cfg.pilot > 1 ? cfg.pilot - 1 : 1;
        Eigen::MatrixXd cov = (centered * centered.transpose()) / denom;
        cov = (2.38 * 2.38 / n) * cov + 1e-6 * Eigen::MatrixXd::Identity(n, n);
        const Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success) {
            proposal_l = llt.matrixL();
        } else {
            res.warnings.push_back("metropolis: pilot covariance not positive definite; keeping isotropic proposal");
        }
    }

    for (int i = 0; i < cfg.burn_in; ++i) step_chain();

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    int accepted = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        if (step_chain()) ++accepted;
        sum += state;
        res.indicator_history.push_back(-state_lp);
    }

    Eigen::VectorXd mean = sum / cfg.samples;
    std::vector<double> samples(mean.data(), mean.data() + n);
    std::sort(samples.begin(), samples.end());

    res.samples = std::move(samples);
    res.acceptance_rate = static_cast<double>(accepted) / cfg.samples;
    res.iterations = cfg.pilot + cfg.burn_in + cfg.samples;
    if (res.acceptance_rate < 0.05 || res.acceptance_rate > 0.7) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "metropolis: acceptance rate %.3f outside [0.05, 0.70]; tune initial_step",
                      res.acceptance_rate);
        res.warnings.push_back(buf);
    }
    res.wall_seconds = watch.seconds();
    return res;
}

std::vector<double> log_spacing(double lambda_min, double lambda_max, int n, double sigma_bar) {
    if (n < 1) throw std::invalid_argument("log_spacing: n must be >= 1");
    if (!(lambda_max > lambda_min))
        throw std::invalid_argument("log_spacing: lambda_max must exceed lambda_min");
    if (!(sigma_bar > 0.0)) throw std::invalid_argument("log_spacing: sigma_bar must be positive");
    if (n == 1) return {lambda_min};
    const double top = std::log1p(sigma_bar * (lambda_max - lambda_min));
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] =
            lambda_min + std::expm1(top * static_cast<double>(k) / (n - 1)) / sigma_bar;
    out.front() = lambda_min;
    out.back() = lambda_max;
    return out;
}

}  // namespace hyrb
