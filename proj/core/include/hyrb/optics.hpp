#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace hyrb {

/// Active coefficient 4-tuple at one wavelength, ordered
/// (D_0, mu_a^0, D_1, mu_a^1): region-0/1 diffusion and absorption.
struct Theta {
    double d0 = 0.0;
    double mu_a0 = 0.0;
    double d1 = 0.0;
    double mu_a1 = 0.0;

    std::array<double, 4> to_array() const { return {d0, mu_a0, d1, mu_a1}; }
    double min() const;
};

struct GaussianBump {
    double center = 0.0;
    double amplitude = 0.0;
    double stddev = 1.0;
};

/// Wavelength (nm) -> optical coefficients (1/cm).  Background absorption is
/// the degree-4 interpolant through five (wavelength, mu_a) control points
/// plus Gaussian bumps; inclusion absorption is an affine transform of it;
/// diffusion is D = 1/(3(mu_a + mu_s')).
class CoefficientModel {
  public:
    /// Exactly five control points with distinct wavelengths are required.
    CoefficientModel(std::array<std::pair<double, double>, 5> control_points,
                     std::vector<GaussianBump> bumps, double inclusion_factor,
                     double inclusion_offset, double mu_s_prime, double lambda_min,
                     double lambda_max);

    /// Stand-in tissue model: quartic through (600,.13) (700,.05) (800,.03)
    /// (900,.06) (1000,.12), bumps at 725 and 950, inclusion factor 2,
    /// mu_s' = 17, band 600-1000 nm.
    static CoefficientModel defaults();

    /// Absorption in region 0 or 1.  Throws std::domain_error when lambda is
    /// outside [lambda_min, lambda_max] and std::invalid_argument for other
    /// region labels.
    double mu_a(int region, double lambda) const;

    /// D = 1/(3(mu_a + mu_s')).
    double diffusion(int region, double lambda) const;

    Theta theta(double lambda) const;

    /// Coercivity proxy min_q theta^q(lambda); positive for a valid model.
    double min_theta(double lambda) const { return theta(lambda).min(); }

    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    double mu_s_prime() const { return mu_s_prime_; }
    double inclusion_factor() const { return inclusion_factor_; }
    double inclusion_offset() const { return inclusion_offset_; }

    /// Scans the band and reports violations of the model invariants
    /// (positivity of all four coefficients, mu_a^1 > mu_a^0).  Empty result
    /// means the model is admissible.
    std::vector<std::string> check_invariants(int scan_points = 2001) const;

  private:
    double background_mu_a(double lambda) const;

    std::array<std::pair<double, double>, 5> control_points_;
    std::vector<GaussianBump> bumps_;
    double inclusion_factor_;
    double inclusion_offset_;
    double mu_s_prime_;
    double lambda_min_;
    double lambda_max_;
    // Quartic coefficients in the shifted/scaled variable (lambda-c)/s.
    std::array<double, 5> poly_{};
    double shift_ = 0.0;
    double scale_ = 1.0;
};

}  // namespace hyrb
