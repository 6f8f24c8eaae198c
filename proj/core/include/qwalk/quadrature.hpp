#pragma once

// Adaptive panel integrator on a 7-point Gauss / 15-point Kronrod pair.
// Panels whose Kronrod-Gauss discrepancy exceeds their proportional share
// of the absolute tolerance are bisected, under a hard panel budget.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qwalk {

namespace detail {

// Nodes and weights of the (G7, K15) pair on [-1, 1]; positive half only,
// node 0 last. Even indices are Kronrod-only nodes, odd ones are shared
// with the embedded Gauss rule.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
inline std::pair<double, double> gauss_kronrod_panel(F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double f_mid = f(mid);
    double kronrod = kKronrodWeights[7] * f_mid;
    double gauss = kGaussWeights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double sum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
    }
    return {kronrod * half, std::abs(kronrod - gauss) * half};
}

} // namespace detail

/// Integrate f over [a, b] to absolute accuracy abs_tol. Throws
/// std::runtime_error if the panel budget runs out before convergence.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-9,
                          int max_panels = 4000) {
    if (!(b > a)) return 0.0;
    const double total_width = b - a;
    const double min_width = total_width * 1e-14;
    std::vector<std::pair<double, double>> worklist{{a, b}};
    double value = 0.0;
    int panels = 0;
    while (!worklist.empty()) {
        const auto [lo, hi] = worklist.back();
        worklist.pop_back();
        if (++panels > max_panels) {
            throw std::runtime_error("integrate_adaptive: panel budget exhausted");
        }
        const auto [estimate, err] = detail::gauss_kronrod_panel(f, lo, hi);
        const double width = hi - lo;
        if (err <= abs_tol * (width / total_width) || width <= min_width) {
            value += estimate;
        } else {
            const double mid = 0.5 * (lo + hi);
            worklist.emplace_back(lo, mid);
            worklist.emplace_back(mid, hi);
        }
    }
    return value;
}

/// Integrate f piecewise over consecutive breakpoint intervals; useful when
/// the integrand has known kinks. Breakpoints must be sorted ascending.
template <class F>
double integrate_adaptive_split(F&& f, std::span<const double> breakpoints,
                                double abs_tol = 1e-9, int max_panels = 4000) {
    if (breakpoints.size() < 2) return 0.0;
    const double total_width = breakpoints.back() - breakpoints.front();
    if (!(total_width > 0.0)) return 0.0;
    double value = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (!(hi > lo)) continue;
        const double share = abs_tol * (hi - lo) / total_width;
        value += integrate_adaptive(f, lo, hi, share, max_panels);
    }
    return value;
}

} // namespace qwalk
