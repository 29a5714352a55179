#include <doctest.h>

#include <array>
#include <stdexcept>
#include <cmath>
#include <random>

#include "hyrb/optics.hpp"

using namespace hyrb;

namespace {

const std::array<std::pair<double, double>, 5> kControl = {
    {{600.0, 0.13}, {700.0, 0.05}, {800.0, 0.03}, {900.0, 0.06}, {1000.0, 0.12}}};
const std::vector<GaussianBump> kBumps = {{725.0, 0.04, 15.0}, {950.0, 0.06, 20.0}};

/// Independent background-absorption oracle: Lagrange form of the quartic
/// through the control points plus the Gaussian bumps.
double mu_a_oracle(double lambda) {
    double poly = 0.0;
    for (int i = 0; i < 5; ++i) {
        double li = 1.0;
        for (int j = 0; j < 5; ++j) {
            if (i == j) continue;
            li *= (lambda - kControl[static_cast<std::size_t>(j)].first) /
                  (kControl[static_cast<std::size_t>(i)].first -
                   kControl[static_cast<std::size_t>(j)].first);
        }
        poly += li * kControl[static_cast<std::size_t>(i)].second;
    }
    for (const GaussianBump& b : kBumps) {
        const double d = lambda - b.center;
        poly += b.amplitude * std::exp(-d * d / (2.0 * b.stddev * b.stddev));
    }
    return poly;
}

}  // namespace

TEST_CASE("background absorption matches a Lagrange-interpolation oracle") {
    const CoefficientModel model = CoefficientModel::defaults();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> band(600.0, 1000.0);
    for (int i = 0; i < 200; ++i) {
        const double lambda = band(rng);
        CHECK(model.mu_a(0, lambda) ==
              doctest::Approx(mu_a_oracle(lambda)).epsilon(1e-11));
    }
    CHECK(model.mu_a(0, 600.0) == doctest::Approx(mu_a_oracle(600.0)).epsilon(1e-12));
    CHECK(model.mu_a(0, 1000.0) == doctest::Approx(mu_a_oracle(1000.0)).epsilon(1e-12));
}

TEST_CASE("defaults equal explicit construction") {
    const CoefficientModel a = CoefficientModel::defaults();
    const CoefficientModel b(kControl, kBumps, 2.0, 0.0, 17.0, 600.0, 1000.0);
    for (double lambda : {600.0, 673.0, 800.0, 951.5, 1000.0}) {
        CHECK(a.mu_a(0, lambda) == b.mu_a(0, lambda));
        CHECK(a.mu_a(1, lambda) == b.mu_a(1, lambda));
    }
    CHECK(a.mu_s_prime() == 17.0);
    CHECK(a.lambda_min() == 600.0);
    CHECK(a.lambda_max() == 1000.0);
}

TEST_CASE("inclusion absorption is the scaled background") {
    const CoefficientModel model = CoefficientModel::defaults();
    for (double lambda : {600.0, 700.0, 810.0, 925.0, 1000.0})
        CHECK(model.mu_a(1, lambda) == doctest::Approx(2.0 * model.mu_a(0, lambda)).epsilon(1e-14));

    const CoefficientModel shifted(kControl, kBumps, 1.5, 0.02, 17.0, 600.0, 1000.0);
    CHECK(shifted.mu_a(1, 750.0) ==
          doctest::Approx(1.5 * shifted.mu_a(0, 750.0) + 0.02).epsilon(1e-14));
}

TEST_CASE("diffusion follows D = 1/(3(mu_a + mu_s'))") {
    const CoefficientModel model = CoefficientModel::defaults();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> band(600.0, 1000.0);
    for (int i = 0; i < 50; ++i) {
        const double lambda = band(rng);
        for (int region : {0, 1})
            CHECK(model.diffusion(region, lambda) ==
                  doctest::Approx(1.0 / (3.0 * (model.mu_a(region, lambda) + 17.0)))
                      .epsilon(1e-14));
    }
}

TEST_CASE("theta packs the four affine coefficients in order") {
    const CoefficientModel model = CoefficientModel::defaults();
    const double lambda = 777.0;
    const Theta th = model.theta(lambda);
    CHECK(th.d0 == model.diffusion(0, lambda));
    CHECK(th.mu_a0 == model.mu_a(0, lambda));
    CHECK(th.d1 == model.diffusion(1, lambda));
    CHECK(th.mu_a1 == model.mu_a(1, lambda));
    const auto arr = th.to_array();
    CHECK(arr[0] == th.d0);
    CHECK(arr[1] == th.mu_a0);
    CHECK(arr[2] == th.d1);
    CHECK(arr[3] == th.mu_a1);
    CHECK(th.min() == std::min({th.d0, th.mu_a0, th.d1, th.mu_a1}));
    CHECK(model.min_theta(lambda) == th.min());
}

TEST_CASE("wavelengths outside the band and bad regions are rejected") {
    const CoefficientModel model = CoefficientModel::defaults();
    CHECK_THROWS_AS(model.mu_a(0, 599.0), std::domain_error);
    CHECK_THROWS_AS(model.mu_a(0, 1000.5), std::domain_error);
    CHECK_THROWS_AS(model.mu_a(2, 700.0), std::invalid_argument);
    CHECK_THROWS_AS(model.mu_a(-1, 700.0), std::invalid_argument);
    CHECK_NOTHROW(model.mu_a(0, 600.0));
    CHECK_NOTHROW(model.mu_a(0, 1000.0));
}

TEST_CASE("construction rejects degenerate control points") {
    auto dup = kControl;
    dup[3].first = 700.0;  // duplicate wavelength
    CHECK_THROWS_AS(CoefficientModel(dup, kBumps, 2.0, 0.0, 17.0, 600.0, 1000.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoefficientModel(kControl, {{700.0, 0.1, 0.0}}, 2.0, 0.0, 17.0, 600.0, 1000.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoefficientModel(kControl, kBumps, 2.0, 0.0, 17.0, 900.0, 700.0),
                    std::invalid_argument);
}

TEST_CASE("invariant scan flags inadmissible models") {
    CHECK(CoefficientModel::defaults().check_invariants().empty());

    // a deep negative dip in the interpolant
    auto sunken = kControl;
    sunken[2].second = -0.4;
    const CoefficientModel negative(sunken, kBumps, 2.0, 0.0, 17.0, 600.0, 1000.0);
    CHECK(!negative.check_invariants().empty());

    // inclusion less absorbing than background breaks the contrast invariant
    const CoefficientModel inverted(kControl, kBumps, 0.5, 0.0, 17.0, 600.0, 1000.0);
    CHECK(!inverted.check_invariants().empty());
}

TEST_CASE("coefficients stay positive across the band") {
    const CoefficientModel model = CoefficientModel::defaults();
    for (int i = 0; i <= 400; ++i) {
        const double lambda = 600.0 + i;
        CHECK(model.min_theta(lambda) > 0.0);
        CHECK(model.mu_a(1, lambda) > model.mu_a(0, lambda));
    }
}
