#pragma once

// Continuum side of the model: the ballistic limit density of a single
// walk, its CDF, compactly supported piecewise-linear profiles, the
// evolved profile (initial profile convolved with the rescaled density),
// and the exact Poisson intensity of the measured occupation field.

#include <span>
#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

/// Half-width of the limit density support: sqrt(2)/2. Positions rescaled
/// by time concentrate on [-sqrt(2)/2, sqrt(2)/2].
double limit_support_half_width();

/// Nonnegative, compactly supported, continuous profile: piecewise-linear
/// between knots, identically zero outside [first knot, last knot]. The
/// boundary knots must carry value 0 so the zero extension is continuous.
class Profile {
public:
    Profile(std::vector<double> knots, std::vector<double> values);

    /// Piecewise-linear evaluation; exactly 0 outside the knot range.
    double operator()(double x) const;

    double support_min() const { return knots_.front(); }
    double support_max() const { return knots_.back(); }
    double max_value() const;
    /// Exact integral of the piecewise-linear interpolant.
    double integral() const;
    bool is_zero() const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }

    static Profile zero();
    static Profile triangle(double center, double half_width, double peak);

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

/// Limit density of the rescaled walk position:
/// f(x) = 1 / (pi (1 - x^2) sqrt(1 - 2 x^2)) for |x| < sqrt(2)/2, else 0.
/// The density diverges at the support endpoints; those two points are
/// mapped to 0, which leaves every integral unchanged.
double limit_density(double x);

/// Ballistic rescaling f_t(x) = (1/t) f(x/t), supported on [-t/sqrt2, t/sqrt2].
double limit_density_rescaled(double t, double x);

/// CDF of the limit density. The substitution x = sin(theta)/sqrt(2)
/// removes the endpoint singularity and admits a closed-form
/// antiderivative: F(x) = 1/2 + atan(x / sqrt(1 - 2x^2)) / pi.
double limit_cdf(double x);

/// Evolved profile rho(t, x) = (gamma * f_t)(x). Exactly 0 whenever
/// [x - t/sqrt2, x + t/sqrt2] misses the support of gamma; otherwise
/// adaptive quadrature in the substituted variable, absolute accuracy
/// about 1e-10 per unit of profile height.
double limit_profile(const Profile& gamma, double t, double x);

/// Exact Poisson intensity of the occupation count at `site` after
/// floor(t*n) steps: B = sum_k gamma(k/n) q(site - k) with q the averaged
/// kernel. The kernel-taking overload lets callers reuse one kernel across
/// many sites.
double poisson_intensity(const Profile& gamma, long long n, double t,
                         long long site);
double poisson_intensity(const Profile& gamma, long long n,
                         const PositionDistribution& kernel, long long site);

/// Number of walk steps at macroscopic time t and scale n: floor(t*n),
/// rounding toward minus infinity.
long long steps_at(double t, long long n);

/// Lattice site at macroscopic position x and scale n: floor(x*n).
long long site_at(double x, long long n);

} // namespace qwalk
