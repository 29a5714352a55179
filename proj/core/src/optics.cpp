#include "hyrb/optics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyrb {

double Theta::min() const { return std::min({d0, mu_a0, d1, mu_a1}); }

CoefficientModel::CoefficientModel(std::array<std::pair<double, double>, 5> control_points,
                                   std::vector<GaussianBump> bumps, double inclusion_factor,
                                   double inclusion_offset, double mu_s_prime,
                                   double lambda_min, double lambda_max)
    : control_points_(control_points),
      bumps_(std::move(bumps)),
      inclusion_factor_(inclusion_factor),
      inclusion_offset_(inclusion_offset),
      mu_s_prime_(mu_s_prime),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max) {
    if (!(lambda_min_ < lambda_max_))
        throw std::invalid_argument("coefficient model: empty wavelength band");
    for (const auto& b : bumps_)
        if (!(b.stddev > 0.0))
            throw std::invalid_argument("coefficient model: bump stddev must be positive");

    double lo = control_points_[0].first, hi = lo;
    for (const auto& [l, v] : control_points_) {
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (!(hi > lo)) throw std::invalid_argument("coefficient model: control points coincide");
    shift_ = 0.5 * (lo + hi);
    scale_ = 0.5 * (hi - lo);

    // Degree-4 interpolation through the five control points, solved in the
    // normalized variable to keep the Vandermonde system well-conditioned.
    Eigen::Matrix<double, 5, 5> vand;
    Eigen::Matrix<double, 5, 1> rhs;
    for (int i = 0; i < 5; ++i) {
        const double x = (control_points_[i].first - shift_) / scale_;
        double p = 1.0;
        for (int j = 0; j < 5; ++j) {
            vand(i, j) = p;
            p *= x;
        }
        rhs(i) = control_points_[i].second;
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(vand);
    if (!lu.isInvertible())
        throw std::invalid_argument("coefficient model: control wavelengths must be distinct");
    const Eigen::Matrix<double, 5, 1> c = lu.solve(rhs);
    for (int j = 0; j < 5; ++j) poly_[j] = c(j);
}

CoefficientModel CoefficientModel::defaults() {
    return CoefficientModel({{{600.0, 0.13},
                              {700.0, 0.05},
                              {800.0, 0.03},
                              {900.0, 0.06},
                              {1000.0, 0.12}}},
                            {{725.0, 0.04, 15.0}, {950.0, 0.06, 20.0}}, 2.0, 0.0, 17.0,
                            600.0, 1000.0);
}

double CoefficientModel::background_mu_a(double lambda) const {
    const double x = (lambda - shift_) / scale_;
    double v = poly_[4];
    for (int j = 3; j >= 0; --j) v = v * x + poly_[j];
    for (const auto& b : bumps_) {
        const double d = lambda - b.center;
        v += b.amplitude * std::exp(-d * d / (2.0 * b.stddev * b.stddev));
    }
    return v;
}

double CoefficientModel::mu_a(int region, double lambda) const {
    const double slack = 1e-9 * (lambda_max_ - lambda_min_);
    if (lambda < lambda_min_ - slack || lambda > lambda_max_ + slack)
        throw std::domain_error("mu_a: wavelength outside the model band");
    if (region != 0 && region != 1)
        throw std::invalid_argument("mu_a: region label must be 0 or 1");
    const double base = background_mu_a(lambda);
    return region == 0 ? base : inclusion_factor_ * base + inclusion_offset_;
}

double CoefficientModel::diffusion(int region, double lambda) const {
    return 1.0 / (3.0 * (mu_a(region, lambda) + mu_s_prime_));
}

Theta CoefficientModel::theta(double lambda) const {
    const double m0 = mu_a(0, lambda);
    const double m1 = mu_a(1, lambda);
    return {1.0 / (3.0 * (m0 + mu_s_prime_)), m0, 1.0 / (3.0 * (m1 + mu_s_prime_)), m1};
}

std::vector<std::string> CoefficientModel::check_invariants(int scan_points) const {
    std::vector<std::string> issues;
    scan_points = std::max(scan_points, 2);
    double worst_pos = std::numeric_limits<double>::max();
    double worst_gap = std::numeric_limits<double>::max();
    double at_pos = lambda_min_, at_gap = lambda_min_;
    for (int i = 0; i < scan_points; ++i) {
        const double l =
            lambda_min_ + (lambda_max_ - lambda_min_) * double(i) / (scan_points - 1);
        const Theta t = theta(l);
        if (t.min() < worst_pos) {
            worst_pos = t.min();
            at_pos = l;
        }
        if (t.mu_a1 - t.mu_a0 < worst_gap) {
            worst_gap = t.mu_a1 - t.mu_a0;
            at_gap = l;
        }
    }
    std::ostringstream ss;
    if (!(worst_pos > 0.0)) {
        ss << "coefficient positivity fails near " << at_pos << " nm (min theta = "
           << worst_pos << ")";
        issues.push_back(ss.str());
        ss.str("");
    }
    if (!(worst_gap > 0.0)) {
        ss << "inclusion absorption does not exceed background near " << at_gap
           << " nm (gap = " << worst_gap << ")";
        issues.push_back(ss.str());
    }
    return issues;
}

}  // namespace hyrb
