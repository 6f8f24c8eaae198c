#include "qwalk/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qwalk/quadrature.hpp"

namespace qwalk {

namespace {

constexpr double kHalfWidth = std::numbers::sqrt2 / 2.0;

// Weight of the limit density after the substitution x = sin(theta)/sqrt2:
// f(x) dx = w(theta) dtheta on (-pi/2, pi/2). Bounded and smooth, so every
// integral of f becomes a well-behaved quadrature problem.
double theta_weight(double theta) {
    const double c = std::cos(theta);
    return std::numbers::sqrt2 / (std::numbers::pi * (1.0 + c * c));
}

} // namespace

double limit_support_half_width() { return kHalfWidth; }

Profile::Profile(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size())
        throw std::invalid_argument("Profile: knots/values size mismatch");
    if (knots_.size() < 2)
        throw std::invalid_argument("Profile: need at least two knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i]))
            throw std::invalid_argument("Profile: non-finite entry at row " +
                                        std::to_string(i));
        if (values_[i] < 0.0)
            throw std::invalid_argument("Profile: negative value at row " +
                                        std::to_string(i));
        if (i > 0 && !(knots_[i - 1] < knots_[i]))
            throw std::invalid_argument(
                "Profile: knots must be strictly increasing (row " +
                std::to_string(i) + ")");
    }
    if (values_.front() != 0.0 || values_.back() != 0.0)
        throw std::invalid_argument(
            "Profile: boundary knots must carry value 0");
}

double Profile::operator()(double x) const {
    if (!(x > knots_.front()) || !(x < knots_.back())) return 0.0;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    const std::size_t lo = hi - 1;
    const double span = knots_[hi] - knots_[lo];
    const double s = (x - knots_[lo]) / span;
    return values_[lo] + s * (values_[hi] - values_[lo]);
}

double Profile::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double Profile::integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        acc += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
    return acc;
}

bool Profile::is_zero() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0; });
}

Profile Profile::zero() { return Profile({-1.0, 1.0}, {0.0, 0.0}); }

Profile Profile::triangle(double center, double half_width, double peak) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("Profile::triangle: half_width must be > 0");
    if (!(peak >= 0.0) || !std::isfinite(peak))
        throw std::invalid_argument("Profile::triangle: bad peak value");
    return Profile({center - half_width, center, center + half_width},
                   {0.0, peak, 0.0});
}

double limit_density(double x) {
    if (std::abs(x) >= kHalfWidth) return 0.0;
    const double r = 1.0 - 2.0 * x * x;
    return 1.0 / (std::numbers::pi * (1.0 - x * x) * std::sqrt(r));
}

double limit_density_rescaled(double t, double x) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("limit_density_rescaled: t must be > 0");
    return limit_density(x / t) / t;
}

double limit_cdf(double x) {
    if (x <= -kHalfWidth) return 0.0;
    if (x >= kHalfWidth) return 1.0;
    // Antiderivative in the substituted variable: integrating the theta
    // weight from -pi/2 to asin(sqrt2 x) gives 1/2 + atan(x/sqrt(1-2x^2))/pi.
    return 0.5 + std::atan(x / std::sqrt(1.0 - 2.0 * x * x)) / std::numbers::pi;
}

double limit_profile(const Profile& gamma, double t, double x) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("limit_profile: t must be > 0");
    if (!std::isfinite(x))
        throw std::invalid_argument("limit_profile: x must be finite");
    const double reach = t * kHalfWidth;
    if (x - reach >= gamma.support_max() || x + reach <= gamma.support_min())
        return 0.0;
    if (gamma.is_zero()) return 0.0;

    // rho(t,x) = int gamma(x - t sin(theta)/sqrt2) w(theta) dtheta. The
    // integrand has a kink wherever the argument crosses a knot of gamma;
    // split there so each panel sees a smooth function.
    const double scale = t / std::numbers::sqrt2;
    std::vector<double> breaks;
    breaks.reserve(gamma.knots().size() + 2);
    breaks.push_back(-std::numbers::pi / 2.0);
    for (double knot : gamma.knots()) {
        const double s = (x - knot) / scale;
        if (s > -1.0 && s < 1.0) breaks.push_back(std::asin(s));
    }
    breaks.push_back(std::numbers::pi / 2.0);
    std::sort(breaks.begin(), breaks.end());

    const auto integrand = [&](double theta) {
        return gamma(x - scale * std::sin(theta)) * theta_weight(theta);
    };
    const double tol = 1e-10 * std::max(1.0, gamma.max_value());
    return integrate_adaptive_split(integrand, breaks, tol);
}

double poisson_intensity(const Profile& gamma, long long n,
                         const PositionDistribution& kernel, long long site) {
    if (n < 1) throw std::invalid_argument("poisson_intensity: n must be >= 1");
    // Widen the support bounds by one site; the profile evaluates to exactly
    // zero outside its support, so stray boundary terms contribute nothing.
    const double lo_real = gamma.support_min() * static_cast<double>(n);
    const double hi_real = gamma.support_max() * static_cast<double>(n);
    long long k_lo = static_cast<long long>(std::floor(lo_real)) - 1;
    long long k_hi = static_cast<long long>(std::ceil(hi_real)) + 1;
    k_lo = std::max(k_lo, site - kernel.last_site());
    k_hi = std::min(k_hi, site - kernel.first_site());
    double acc = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k)
        acc += gamma(static_cast<double>(k) / static_cast<double>(n)) *
               kernel.prob_at(site - k);
    return acc;
}

double poisson_intensity(const Profile& gamma, long long n, double t,
                         long long site) {
    return poisson_intensity(gamma, n, averaged_kernel(steps_at(t, n)), site);
}

long long steps_at(double t, long long n) {
    if (n < 1) throw std::invalid_argument("steps_at: n must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("steps_at: t must be finite and >= 0");
    const double raw = t * static_cast<double>(n);
    if (raw > 1e15) throw std::invalid_argument("steps_at: t*n too large");
    return static_cast<long long>(std::floor(raw));
}

long long site_at(double x, long long n) {
    if (n < 1) throw std::invalid_argument("site_at: n must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("site_at: x not finite");
    const double raw = x * static_cast<double>(n);
    if (std::abs(raw) > 1e15) throw std::invalid_argument("site_at: x*n too large");
    return static_cast<long long>(std::floor(raw));
}

} // namespace qwalk
