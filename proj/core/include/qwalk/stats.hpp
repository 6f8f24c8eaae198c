#pragma once

// Distances, exact moments, and the three convergence experiments: law of
// large numbers for a single walk, local equilibrium of the occupation
// field, and the hydrodynamic limit of rescaled empirical functionals.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/analytics.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/random.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Total variation distance between two pmfs given on {0, 1, ...} (or any
/// common indexing); any missing mass is treated as a shared overflow bin,
/// so truncated pmfs compare correctly as long as their tails are small.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Poisson(mean) pmf truncated once the captured mass reaches
/// 1 - tail_bound.
std::vector<double> truncated_poisson_pmf(double mean, double tail_bound = 1e-12);

/// Total variation between an occupation histogram and Poisson(mean).
double poisson_tv(const CountHistogram& hist, double mean);

/// Verdict form of poisson_tv against a fixed threshold.
struct PoissonFit {
    double tv = 0.0;
    bool pass = false;
};
PoissonFit poisson_fit(const CountHistogram& hist, double mean,
                       double threshold = 0.01);

/// Kolmogorov-Smirnov distance between the rescaled position law (atoms at
/// site/n under the given kernel) and the continuum limit CDF.
double ks_distance_to_limit(const PositionDistribution& kernel, long long n);

/// Metric values along a sequence of lattice scales. `spreads` carries a
/// per-scale companion number whose meaning depends on the experiment
/// (noise floor, exact-law distance, ...); it may be empty.
struct ConvergenceReport {
    std::string metric;
    std::vector<long long> scales;
    std::vector<double> values;
    std::vector<double> spreads;

    /// True when the metric at the largest scale is strictly below the
    /// metric at the smallest. Needs at least two scales.
    bool trend_down() const;
};

/// KS distance of the exact n-step averaged kernel from the limit CDF,
/// for each scale. Deterministic.
ConvergenceReport lln_scan(std::span<const long long> n_list);

/// Continuous compactly supported test function with quadrature hints.
struct TestFunction {
    std::string name;
    std::function<double(double)> fn;
    double support_min = 0.0;
    double support_max = 0.0;
    std::vector<double> kinks;

    double operator()(double x) const { return fn(x); }
};

TestFunction triangle_test(double center, double half_width, double peak);
TestFunction cosine_bump_test(double center, double half_width, double peak);
/// Wraps a (nonnegative, piecewise-linear) profile as a test function,
/// with its knots as quadrature kinks.
TestFunction test_from_profile(const Profile& profile, std::string name);

/// Limit value of the empirical functional: integral of H against the
/// evolved profile rho(t, .). Absolute quadrature accuracy about 1e-8.
double hydro_target(const Profile& gamma, const TestFunction& test_fn, double t);

/// Exact finite-n mean and variance of the empirical functional
/// (1/n) sum_j H(j/n) eta(j): the counts are independent Poissons, so both
/// are kernel-weighted sums over the support of H.
double functional_mean_exact(const Profile& gamma, const TestFunction& test_fn,
                             long long n, long long steps);
double functional_variance_exact(const Profile& gamma,
                                 const TestFunction& test_fn, long long n,
                                 long long steps);

/// Distribution of the occupation number at the site tracking macroscopic
/// position x, against the limit law Poisson(rho(t, x)), for each scale.
struct LocalEquilibriumScan {
    double rho = 0.0;               // limit intensity at (t, x)
    std::vector<long long> scales;
    std::vector<double> tv_to_limit;  // empirical histogram vs Poisson(rho)
    std::vector<double> exact_tv;     // Poisson(B_n) vs Poisson(rho)
    std::vector<double> intensities;  // exact finite-n means B_n

    ConvergenceReport report() const;
};

LocalEquilibriumScan local_equilibrium_scan(const Profile& gamma, double t,
                                            double x,
                                            std::span<const long long> n_list,
                                            std::uint64_t replicas,
                                            const RandomSource& src,
                                            int threads = 1);

/// Monte Carlo means and spreads of the empirical functional per scale,
/// with the exact finite-n moments and the limit target alongside.
struct HydroScan {
    double target = 0.0;            // limit value of the functional
    std::vector<long long> scales;
    std::vector<double> means;       // Monte Carlo means
    std::vector<double> sds;         // sample standard deviations
    std::vector<double> exact_means; // exact finite-n expectations
    std::vector<double> exact_sds;   // exact finite-n standard deviations

    ConvergenceReport report() const; // metric |mean - target|
};

HydroScan hydro_scan(const Profile& gamma, const TestFunction& test_fn,
                     double t, std::span<const long long> n_list,
                     std::uint64_t replicas, const RandomSource& src,
                     int threads = 1);

} // namespace qwalk
