#include "qwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qwalk/quadrature.hpp"

namespace qwalk {

namespace {

// Substream tags separating the per-scale batches of the two experiments.
constexpr std::uint64_t kLocalScaleTag = 0x10ca1;
constexpr std::uint64_t kHydroScaleTag = 0xd120;

void check_pmf(std::span<const double> p, const char* who) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(who) +
                                        ": pmf entries must be finite and >= 0");
        sum += v;
    }
    if (sum > 1.0 + 1e-9)
        throw std::invalid_argument(std::string(who) + ": pmf mass exceeds 1");
}

void check_scales(std::span<const long long> n_list, const char* who) {
    if (n_list.size() < 2)
        throw std::invalid_argument(std::string(who) +
                                    ": need at least two scales");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1)
            throw std::invalid_argument(std::string(who) +
                                        ": scales must be >= 1");
        if (i > 0 && !(n_list[i - 1] < n_list[i]))
            throw std::invalid_argument(
                std::string(who) + ": scales must be strictly increasing");
    }
}

} // namespace

double tv_distance(std::span<const double> p, std::span<const double> q) {
    check_pmf(p, "tv_distance");
    check_pmf(q, "tv_distance");
    const std::size_t m = std::max(p.size(), q.size());
    double acc = 0.0;
    double sum_p = 0.0;
    double sum_q = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pi = i < p.size() ? p[i] : 0.0;
        const double qi = i < q.size() ? q[i] : 0.0;
        acc += std::abs(pi - qi);
        sum_p += pi;
        sum_q += qi;
    }
    // Missing mass on each side sits in an implicit overflow bin.
    return 0.5 * (acc + std::abs(sum_p - sum_q));
}

std::vector<double> truncated_poisson_pmf(double mean, double tail_bound) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument(
            "truncated_poisson_pmf: mean must be finite and >= 0");
    if (!(tail_bound > 0.0) || tail_bound >= 1.0)
        throw std::invalid_argument(
            "truncated_poisson_pmf: tail_bound must be in (0, 1)");
    if (mean == 0.0) return {1.0};
    std::vector<double> pmf;
    double p = std::exp(-mean);
    double cum = p;
    pmf.push_back(p);
    const std::size_t cap =
        static_cast<std::size_t>(mean + 20.0 * std::sqrt(mean) + 200.0);
    while (1.0 - cum > tail_bound && pmf.size() <= cap) {
        p *= mean / static_cast<double>(pmf.size());
        cum += p;
        pmf.push_back(p);
    }
    return pmf;
}

double poisson_tv(const CountHistogram& hist, double mean) {
    return tv_distance(hist.pmf(), truncated_poisson_pmf(mean));
}

PoissonFit poisson_fit(const CountHistogram& hist, double mean,
                       double threshold) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("poisson_fit: threshold must be > 0");
    const double tv = poisson_tv(hist, mean);
    return PoissonFit{tv, tv <= threshold};
}

double ks_distance_to_limit(const PositionDistribution& kernel, long long n) {
    if (n < 0)
        throw std::invalid_argument("ks_distance_to_limit: n must be >= 0");
    // n = 0 still has a well-defined point-mass law; rescale by 1 there.
    const double scale = static_cast<double>(std::max<long long>(n, 1));
    // The rescaled CDF jumps only at the atoms site/n; since the limit CDF
    // is continuous and monotone, the supremum is attained at an atom, from
    // one side or the other.
    double ks = 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < kernel.probs.size(); ++i) {
        const double p = kernel.probs[i];
        if (p == 0.0) continue;
        const double x =
            static_cast<double>(kernel.offset + static_cast<long long>(i)) /
            scale;
        const double f = limit_cdf(x);
        ks = std::max(ks, std::abs(f - cum));
        cum += p;
        ks = std::max(ks, std::abs(f - cum));
    }
    return ks;
}

bool ConvergenceReport::trend_down() const {
    if (scales.size() < 2)
        throw std::invalid_argument(
            "ConvergenceReport: trend needs at least two scales");
    return values.back() < values.front();
}

ConvergenceReport lln_scan(std::span<const long long> n_list) {
    check_scales(n_list, "lln_scan");
    ConvergenceReport report;
    report.metric = "ks";
    for (long long n : n_list) {
        report.scales.push_back(n);
        report.values.push_back(ks_distance_to_limit(averaged_kernel(n), n));
    }
    return report;
}

TestFunction triangle_test(double center, double half_width, double peak) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("triangle_test: half_width must be > 0");
    TestFunction t;
    t.name = "triangle";
    t.fn = [center, half_width, peak](double x) {
        const double d = std::abs(x - center);
        return d >= half_width ? 0.0 : peak * (1.0 - d / half_width);
    };
    t.support_min = center - half_width;
    t.support_max = center + half_width;
    t.kinks = {center - half_width, center, center + half_width};
    return t;
}

TestFunction cosine_bump_test(double center, double half_width, double peak) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("cosine_bump_test: half_width must be > 0");
    TestFunction t;
    t.name = "cosine_bump";
    t.fn = [center, half_width, peak](double x) {
        const double d = x - center;
        if (std::abs(d) >= half_width) return 0.0;
        const double c = std::cos(0.5 * std::numbers::pi * d / half_width);
        return peak * c * c;
    };
    t.support_min = center - half_width;
    t.support_max = center + half_width;
    t.kinks = {center - half_width, center + half_width};
    return t;
}

TestFunction test_from_profile(const Profile& profile, std::string name) {
    TestFunction t;
    t.name = std::move(name);
    t.fn = profile;
    t.support_min = profile.support_min();
    t.support_max = profile.support_max();
    t.kinks.assign(profile.knots().begin(), profile.knots().end());
    return t;
}

double hydro_target(const Profile& gamma, const TestFunction& test_fn,
                    double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("hydro_target: t must be > 0");
    const double lo = test_fn.support_min;
    const double hi = test_fn.support_max;
    if (!(lo < hi))
        throw std::invalid_argument("hydro_target: empty test support");
    // The integrand kinks where H does and where the reach of the kernel
    // crosses a knot of gamma.
    std::vector<double> breaks{lo, hi};
    for (double k : test_fn.kinks)
        if (k > lo && k < hi) breaks.push_back(k);
    const double reach = t * limit_support_half_width();
    for (double knot : gamma.knots())
        for (double b : {knot - reach, knot + reach})
            if (b > lo && b < hi) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    const auto integrand = [&](double x) {
        return test_fn(x) * limit_profile(gamma, t, x);
    };
    return integrate_adaptive_split(integrand, breaks, 1e-8);
}

namespace {

// Shared loop for the exact moments: weight(j) * B(j) summed over the
// support of the test function.
double weighted_intensity_sum(const Profile& gamma, const TestFunction& test_fn,
                              long long n, long long steps, bool square) {
    if (n < 1)
        throw std::invalid_argument("functional moments: n must be >= 1");
    const PositionDistribution kernel = averaged_kernel(steps);
    const long long j_lo =
        static_cast<long long>(std::floor(test_fn.support_min * static_cast<double>(n))) - 1;
    const long long j_hi =
        static_cast<long long>(std::ceil(test_fn.support_max * static_cast<double>(n))) + 1;
    double acc = 0.0;
    for (long long j = j_lo; j <= j_hi; ++j) {
        const double h = test_fn(static_cast<double>(j) / static_cast<double>(n));
        if (h == 0.0) continue;
        const double w = square ? h * h : h;
        acc += w * poisson_intensity(gamma, n, kernel, j);
    }
    return acc;
}

} // namespace

double functional_mean_exact(const Profile& gamma, const TestFunction& test_fn,
                             long long n, long long steps) {
    return weighted_intensity_sum(gamma, test_fn, n, steps, false) /
           static_cast<double>(n);
}

double functional_variance_exact(const Profile& gamma,
                                 const TestFunction& test_fn, long long n,
                                 long long steps) {
    const double nd = static_cast<double>(n);
    return weighted_intensity_sum(gamma, test_fn, n, steps, true) / (nd * nd);
}

ConvergenceReport LocalEquilibriumScan::report() const {
    return ConvergenceReport{"tv", scales, tv_to_limit, exact_tv};
}

LocalEquilibriumScan local_equilibrium_scan(const Profile& gamma, double t,
                                            double x,
                                            std::span<const long long> n_list,
                                            std::uint64_t replicas,
                                            const RandomSource& src,
                                            int threads) {
    check_scales(n_list, "local_equilibrium_scan");
    if (replicas < 1)
        throw std::invalid_argument(
            "local_equilibrium_scan: need >= 1 replica");

    LocalEquilibriumScan scan;
    scan.rho = limit_profile(gamma, t, x);
    const std::vector<double> limit_pmf = truncated_poisson_pmf(scan.rho);

    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const long long n = n_list[i];
        const long long steps = steps_at(t, n);
        const long long site = site_at(x, n);
        const RandomSource scale_src = src.substream(kLocalScaleTag + i);

        std::vector<std::uint64_t> counts(replicas);
        for_each_replica(replicas, threads, [&](std::uint64_t r) {
            const OccupationField field =
                simulate_occupation(gamma, n, steps, scale_src.substream(r));
            counts[r] = field.count_at(site);
        });
        CountHistogram hist;
        for (std::uint64_t c : counts) hist.add(c);

        const double intensity = poisson_intensity(gamma, n, t, site);
        scan.scales.push_back(n);
        scan.tv_to_limit.push_back(tv_distance(hist.pmf(), limit_pmf));
        scan.exact_tv.push_back(
            tv_distance(truncated_poisson_pmf(intensity), limit_pmf));
        scan.intensities.push_back(intensity);
    }
    return scan;
}

ConvergenceReport HydroScan::report() const {
    ConvergenceReport report;
    report.metric = "abs_err";
    report.scales = scales;
    for (std::size_t i = 0; i < means.size(); ++i) {
        report.values.push_back(std::abs(means[i] - target));
        report.spreads.push_back(sds[i]);
    }
    return report;
}

HydroScan hydro_scan(const Profile& gamma, const TestFunction& test_fn,
                     double t, std::span<const long long> n_list,
                     std::uint64_t replicas, const RandomSource& src,
                     int threads) {
    check_scales(n_list, "hydro_scan");
    if (replicas < 2)
        throw std::invalid_argument("hydro_scan: need >= 2 replicas");

    HydroScan scan;
    scan.target = hydro_target(gamma, test_fn, t);

    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const long long n = n_list[i];
        const long long steps = steps_at(t, n);
        const RandomSource scale_src = src.substream(kHydroScaleTag + i);

        std::vector<double> values(replicas);
        for_each_replica(replicas, threads, [&](std::uint64_t r) {
            const OccupationField field =
                simulate_occupation(gamma, n, steps, scale_src.substream(r));
            values[r] = empirical_functional(field, test_fn.fn);
        });
        double sum = 0.0;
        for (double v : values) sum += v;
        const double mean = sum / static_cast<double>(replicas);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(replicas - 1));

        scan.scales.push_back(n);
        scan.means.push_back(mean);
        scan.sds.push_back(sd);
        scan.exact_means.push_back(functional_mean_exact(gamma, test_fn, n, steps));
        scan.exact_sds.push_back(
            std::sqrt(functional_variance_exact(gamma, test_fn, n, steps)));
    }
    return scan;
}

} // namespace qwalk
