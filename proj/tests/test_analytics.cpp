#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qwalk/analytics.hpp"
#include "qwalk/quadrature.hpp"
#include "qwalk/walk.hpp"
#include "support/simpson.hpp"

using qwalk::Profile;

namespace {

// Weight of the limit density in the substituted variable; the oracle
// integrals below are all phrased through it.
double theta_weight(double theta) {
    const double c = std::cos(theta);
    return std::numbers::sqrt2 / (std::numbers::pi * (1.0 + c * c));
}

constexpr double kHalf = std::numbers::sqrt2 / 2.0;

} // namespace

TEST_SUITE("analytics") {

TEST_CASE("profile validation") {
    CHECK_NOTHROW(Profile({-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0}));
    CHECK_THROWS_AS(Profile({0.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Profile({0.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Profile({1.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Profile({-1.0, 1.0}, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Profile({-1.0, 0.0, 1.0}, {0.0, -0.1, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Profile({-1.0, NAN, 1.0}, {0.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Profile({-1.0, 1.0}, {0.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("profile evaluation and integral") {
    const Profile tri = Profile::triangle(0.0, 1.0, 2.0);
    CHECK(tri(0.0) == 2.0);
    CHECK(tri(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tri(-0.25) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(tri(1.0) == 0.0);
    CHECK(tri(5.0) == 0.0);
    CHECK(tri(-5.0) == 0.0);
    CHECK(tri.integral() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(tri.max_value() == 2.0);
    CHECK(tri.support_min() == -1.0);
    CHECK(tri.support_max() == 1.0);
    CHECK_FALSE(tri.is_zero());
    CHECK(Profile::zero().is_zero());
    CHECK(Profile::zero()(0.3) == 0.0);

    const Profile trap({0.0, 1.0, 3.0, 4.0}, {0.0, 2.0, 2.0, 0.0});
    CHECK(trap(2.0) == 2.0);
    CHECK(trap.integral() == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("limit density pointwise") {
    CHECK(qwalk::limit_density(0.0) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(qwalk::limit_density(0.5) ==
          doctest::Approx(1.0 / (std::numbers::pi * 0.75 * std::sqrt(0.5)))
              .epsilon(1e-13));
    CHECK(qwalk::limit_density(0.75) == 0.0);
    CHECK(qwalk::limit_density(kHalf) == 0.0);
    CHECK(qwalk::limit_density(-kHalf) == 0.0);
    for (double x = 0.0; x < 0.7; x += 0.013)
        CHECK(qwalk::limit_density(x) ==
              doctest::Approx(qwalk::limit_density(-x)).epsilon(1e-15));
    CHECK(qwalk::limit_support_half_width() * qwalk::limit_support_half_width() ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("rescaled density") {
    for (double x = -1.0; x <= 1.0; x += 0.07)
        CHECK(qwalk::limit_density_rescaled(1.0, x) ==
              qwalk::limit_density(x));
    CHECK(qwalk::limit_density_rescaled(2.0, 0.0) ==
          doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-15));
    CHECK(qwalk::limit_density_rescaled(2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(qwalk::limit_density_rescaled(0.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(qwalk::limit_density_rescaled(-1.0, 0.1),
                    std::invalid_argument);
}

TEST_CASE("density integrates to one, directly and via substitution") {
    // Substituted form: bounded integrand. Simpson oracle and the adaptive
    // integrator agree with the exact value to full precision.
    const double theta_mass = testsupport::simpson(
        theta_weight, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 20000);
    CHECK(std::abs(theta_mass - 1.0) < 1e-12);
    const double theta_mass_gk = qwalk::integrate_adaptive(
        theta_weight, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 1e-12);
    CHECK(std::abs(theta_mass_gk - 1.0) < 1e-12);

    // Raw form: integrable inverse-square-root endpoints. The adaptive
    // integrator has to grind the singular ends down to its width floor,
    // so expect modest absolute accuracy here (the substitution exists
    // precisely because of this).
    for (const double t : {0.5, 1.0, 3.0}) {
        const auto f = [t](double x) { return qwalk::limit_density_rescaled(t, x); };
        const double h = t * kHalf;
        const double mass = qwalk::integrate_adaptive_split(
            f, std::vector<double>{-h, 0.0, h}, 1e-9, 200000);
        CHECK(std::abs(mass - 1.0) < 1e-5);
    }
}

TEST_CASE("limit cdf closed form vs quadrature oracle") {
    CHECK(qwalk::limit_cdf(-1.0) == 0.0);
    CHECK(qwalk::limit_cdf(1.0) == 1.0);
    CHECK(qwalk::limit_cdf(-kHalf) == 0.0);
    CHECK(qwalk::limit_cdf(kHalf) == 1.0);
    CHECK(qwalk::limit_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));

    for (const double x : {-0.7, -0.5, -0.3, -0.1, 0.05, 0.2, 0.45, 0.69}) {
        const double upper =
            x <= -kHalf ? -std::numbers::pi / 2.0
                        : (x >= kHalf ? std::numbers::pi / 2.0
                                      : std::asin(std::numbers::sqrt2 * x));
        const double ref = testsupport::simpson(
            theta_weight, -std::numbers::pi / 2.0, upper, 20000);
        CHECK(std::abs(qwalk::limit_cdf(x) - ref) < 1e-9);
        // Evenness of the density pins F(x) + F(-x) = 1.
        CHECK(std::abs(qwalk::limit_cdf(x) + qwalk::limit_cdf(-x) - 1.0) < 1e-12);
    }

    double prev = -1.0;
    for (double x = -0.8; x <= 0.8; x += 0.01) {
        const double f = qwalk::limit_cdf(x);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("evolved profile: constants, support, approximate identity") {
    CHECK_THROWS_AS(qwalk::limit_profile(Profile::zero(), 0.0, 0.0),
                    std::invalid_argument);

    // Flat profile much wider than the kernel reach: convolution with a
    // unit-mass kernel returns the plateau height.
    const Profile plateau({-10.0, -9.0, 9.0, 10.0}, {0.0, 3.0, 3.0, 0.0});
    CHECK(qwalk::limit_profile(plateau, 1.0, 0.0) ==
          doctest::Approx(3.0).epsilon(1e-9));
    CHECK(qwalk::limit_profile(plateau, 2.0, 1.5) ==
          doctest::Approx(3.0).epsilon(1e-9));

    // Exactly zero beyond the propagation cone.
    const Profile tri = Profile::triangle(0.0, 1.0, 1.0);
    const double t = 0.7;
    CHECK(qwalk::limit_profile(tri, t, 1.0 + t * kHalf + 0.1) == 0.0);
    CHECK(qwalk::limit_profile(tri, t, -1.0 - t * kHalf - 0.1) == 0.0);
    CHECK(qwalk::limit_profile(Profile::zero(), 1.0, 0.0) == 0.0);

    // Small times: the rescaled kernel acts as an approximate identity.
    CHECK(std::abs(qwalk::limit_profile(tri, 0.01, 0.0) - tri(0.0)) < 2e-3);
}

TEST_CASE("evolved profile vs direct substituted quadrature") {
    const Profile gamma({-0.5, -0.1, 0.2, 0.6}, {0.0, 1.5, 0.8, 0.0});
    for (const double t : {0.5, 1.0, 2.0}) {
        for (const double x : {-0.8, -0.2, 0.0, 0.3, 0.9}) {
            const double scale = t / std::numbers::sqrt2;
            const auto integrand = [&](double theta) {
                return gamma(x - scale * std::sin(theta)) * theta_weight(theta);
            };
            const double ref = testsupport::simpson(
                integrand, -std::numbers::pi / 2.0, std::numbers::pi / 2.0,
                200000);
            CHECK(std::abs(qwalk::limit_profile(gamma, t, x) - ref) < 1e-7);
        }
    }
}

TEST_CASE("mass conservation of the evolved profile") {
    const Profile gamma = Profile::triangle(0.1, 0.5, 1.0);
    for (const double t : {0.5, 1.0, 2.0}) {
        const double reach = t * kHalf;
        const double lo = gamma.support_min() - reach;
        const double hi = gamma.support_max() + reach;
        std::vector<double> breaks{lo, hi};
        for (double knot : gamma.knots())
            for (double b : {knot - reach, knot + reach})
                if (b > lo && b < hi) breaks.push_back(b);
        std::sort(breaks.begin(), breaks.end());
        const double mass = qwalk::integrate_adaptive_split(
            [&](double x) { return qwalk::limit_profile(gamma, t, x); }, breaks,
            1e-7, 20000);
        CHECK(std::abs(mass - gamma.integral()) < 1e-6);
    }
}

TEST_CASE("poisson intensity") {
    const long long n = 50;

    // Zero profile: empty system.
    CHECK(qwalk::poisson_intensity(Profile::zero(), n, 1.0, 3) == 0.0);

    // Plateau covering the whole kernel window: kernel mass sums to 1.
    const Profile plateau({-10.0, -9.0, 9.0, 10.0}, {0.0, 2.5, 2.5, 0.0});
    const long long steps = qwalk::steps_at(1.0, n);
    CHECK(qwalk::poisson_intensity(plateau, n, 1.0, 0) ==
          doctest::Approx(2.5).epsilon(1e-12));

    // Translation covariance: shift knots by m/n and the site by m.
    const Profile tri = Profile::triangle(0.0, 0.5, 1.0);
    const long long m = 13;
    std::vector<double> knots(tri.knots().begin(), tri.knots().end());
    for (double& k : knots) k += static_cast<double>(m) / static_cast<double>(n);
    const Profile shifted(std::move(knots),
                          {tri.values().begin(), tri.values().end()});
    const auto kernel = qwalk::averaged_kernel(steps);
    for (const long long j : {-20LL, -3LL, 0LL, 7LL, 25LL})
        CHECK(qwalk::poisson_intensity(shifted, n, kernel, j + m) ==
              doctest::Approx(qwalk::poisson_intensity(tri, n, kernel, j))
                  .epsilon(1e-12));

    CHECK_THROWS_AS(qwalk::poisson_intensity(tri, 0, 1.0, 0),
                    std::invalid_argument);
}

TEST_CASE("finite-n intensity approaches the evolved profile") {
    const Profile tri = Profile::triangle(0.0, 0.5, 1.0);
    const long long n = 2000;
    const double t = 1.0;
    const double x = 0.3;
    const double b = qwalk::poisson_intensity(tri, n, t, qwalk::site_at(x, n));
    const double rho = qwalk::limit_profile(tri, t, x);
    CHECK(std::abs(b - rho) <= 0.02 * tri.max_value());
}

TEST_CASE("floor helpers round toward minus infinity") {
    CHECK(qwalk::steps_at(1.0, 64) == 64);
    CHECK(qwalk::steps_at(0.999, 1000) == 999);
    CHECK(qwalk::steps_at(0.0, 10) == 0);
    CHECK(qwalk::site_at(0.3, 32) == 9);
    CHECK(qwalk::site_at(-0.31, 10) == -4);
    CHECK(qwalk::site_at(-0.3, 10) == -3);
    CHECK_THROWS_AS(qwalk::steps_at(-0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(qwalk::steps_at(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(qwalk::site_at(0.5, 0), std::invalid_argument);
}

} // TEST_SUITE
