#include "qwalk/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace qwalk {

namespace {

// Substream tags separating the two random phases of one replica.
constexpr std::uint64_t kPhaseField = 0xf1e1d;
constexpr std::uint64_t kPhaseMeasure = 0x3ea5;

} // namespace

FieldConfiguration::FieldConfiguration(std::vector<SiteOccupancy> entries,
                                       long long scale_n)
    : entries_(std::move(entries)), scale_n_(scale_n) {
    if (scale_n_ < 1)
        throw std::invalid_argument("FieldConfiguration: scale_n must be >= 1");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0 && !(entries_[i - 1].site < entries_[i].site))
            throw std::invalid_argument(
                "FieldConfiguration: sites must be strictly increasing");
        if (entries_[i].plus == 0 && entries_[i].minus == 0)
            throw std::invalid_argument(
                "FieldConfiguration: empty row at site " +
                std::to_string(entries_[i].site));
    }
}

std::uint64_t FieldConfiguration::total_walkers() const {
    std::uint64_t n = 0;
    for (const auto& e : entries_) n += e.plus + e.minus;
    return n;
}

std::uint64_t FieldConfiguration::count(long long site, Coin c) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), site,
        [](const SiteOccupancy& e, long long s) { return e.site < s; });
    if (it == entries_.end() || it->site != site) return 0;
    return c == Coin::Plus ? it->plus : it->minus;
}

std::uint64_t OccupationField::count_at(long long site) const {
    if (site < first_site() || site > last_site()) return 0;
    return counts[static_cast<std::size_t>(site - offset)];
}

std::uint64_t OccupationField::total() const {
    std::uint64_t n = 0;
    for (std::uint64_t c : counts) n += c;
    return n;
}

FieldConfiguration sample_field(const Profile& gamma, long long n,
                                const RandomSource& src) {
    if (n < 1) throw std::invalid_argument("sample_field: n must be >= 1");
    auto eng = src.engine();
    // One site beyond the support on each end; the profile is zero there,
    // Poisson(0) draws consume no randomness, and nothing is stored.
    const long long k_lo =
        static_cast<long long>(std::floor(gamma.support_min() * static_cast<double>(n))) - 1;
    const long long k_hi =
        static_cast<long long>(std::ceil(gamma.support_max() * static_cast<double>(n))) + 1;
    std::vector<SiteOccupancy> entries;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const double mean =
            0.5 * gamma(static_cast<double>(k) / static_cast<double>(n));
        const std::uint64_t plus = poisson_draw(mean, eng);
        const std::uint64_t minus = poisson_draw(mean, eng);
        if (plus + minus > 0) entries.push_back({k, plus, minus});
    }
    return FieldConfiguration(std::move(entries), n);
}

PositionSampler::PositionSampler(const PositionDistribution& dist)
    : offset_(dist.offset) {
    if (dist.probs.empty())
        throw std::invalid_argument("PositionSampler: empty distribution");
    cdf_.resize(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        cdf_[i] = acc;
    }
    // Close the top so a uniform draw of 1 - eps cannot fall past the end.
    cdf_.back() = std::max(cdf_.back(), 1.0);
}

long long PositionSampler::sample(std::mt19937_64& eng) const {
    const double u = uniform01(eng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return offset_ + static_cast<long long>(idx);
}

OccupationField measure_field(const FieldConfiguration& config, long long steps,
                              const RandomSource& src) {
    if (steps < 0)
        throw std::invalid_argument("measure_field: steps must be >= 0");
    OccupationField field;
    field.time_steps = steps;
    field.scale_n = config.scale_n();
    if (config.empty()) return field;

    const PositionSampler plus_sampler(chirality_kernel(steps, Coin::Plus));
    const PositionSampler minus_sampler(chirality_kernel(steps, Coin::Minus));

    const long long lo = config.entries().front().site - steps;
    const long long hi = config.entries().back().site + steps;
    field.offset = lo;
    field.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);

    auto eng = src.engine();
    for (const auto& e : config.entries()) {
        for (std::uint64_t w = 0; w < e.plus; ++w) {
            const long long pos = e.site + plus_sampler.sample(eng);
            ++field.counts[static_cast<std::size_t>(pos - lo)];
        }
        for (std::uint64_t w = 0; w < e.minus; ++w) {
            const long long pos = e.site + minus_sampler.sample(eng);
            ++field.counts[static_cast<std::size_t>(pos - lo)];
        }
    }
    return field;
}

OccupationField simulate_occupation(const Profile& gamma, long long n,
                                    long long steps, const RandomSource& src) {
    const FieldConfiguration config =
        sample_field(gamma, n, src.substream(kPhaseField));
    return measure_field(config, steps, src.substream(kPhaseMeasure));
}

double empirical_functional(const OccupationField& field,
                            const std::function<double(double)>& test_fn) {
    const double n = static_cast<double>(field.scale_n);
    double acc = 0.0;
    for (std::size_t i = 0; i < field.counts.size(); ++i) {
        if (field.counts[i] == 0) continue;
        const double x =
            static_cast<double>(field.offset + static_cast<long long>(i)) / n;
        acc += test_fn(x) * static_cast<double>(field.counts[i]);
    }
    return acc / n;
}

void CountHistogram::add(std::uint64_t count) {
    if (count >= freq.size()) freq.resize(count + 1, 0);
    ++freq[count];
    ++samples;
}

void CountHistogram::merge(const CountHistogram& other) {
    if (other.freq.size() > freq.size()) freq.resize(other.freq.size(), 0);
    for (std::size_t i = 0; i < other.freq.size(); ++i) freq[i] += other.freq[i];
    samples += other.samples;
}

std::vector<double> CountHistogram::pmf() const {
    if (samples == 0)
        throw std::invalid_argument("CountHistogram: no samples");
    std::vector<double> p(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i)
        p[i] = static_cast<double>(freq[i]) / static_cast<double>(samples);
    return p;
}

std::map<long long, CountHistogram>
window_histogram(std::span<const OccupationField> fields, long long center,
                 long long half_width) {
    if (half_width < 0)
        throw std::invalid_argument("window_histogram: half_width must be >= 0");
    std::map<long long, CountHistogram> hists;
    for (long long o = -half_width; o <= half_width; ++o) hists[o];
    for (const auto& field : fields)
        for (long long o = -half_width; o <= half_width; ++o)
            hists[o].add(field.count_at(center + o));
    return hists;
}

void for_each_replica(std::uint64_t replicas, int threads,
                      const std::function<void(std::uint64_t)>& body) {
    if (replicas == 0) return;
    const std::uint64_t workers = std::min<std::uint64_t>(
        replicas, static_cast<std::uint64_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::uint64_t r = 0; r < replicas; ++r) body(r);
        return;
    }
    std::mutex fail_mutex;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = replicas * w / workers;
        const std::uint64_t hi = replicas * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::uint64_t r = lo; r < hi; ++r) body(r);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

void validate_weights(const LaplaceWeights& lambda) {
    if (lambda.empty())
        throw std::invalid_argument("laplace: need at least one weight");
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!std::isfinite(lambda[i].second) || lambda[i].second < 0.0)
            throw std::invalid_argument(
                "laplace: weights must be finite and >= 0");
        if (i > 0 && !(lambda[i - 1].first < lambda[i].first))
            throw std::invalid_argument(
                "laplace: weight sites must be strictly increasing");
    }
}

} // namespace

double laplace_exact(const Profile& gamma, long long n, long long steps,
                     const LaplaceWeights& lambda) {
    if (n < 1) throw std::invalid_argument("laplace_exact: n must be >= 1");
    if (steps < 0)
        throw std::invalid_argument("laplace_exact: steps must be >= 0");
    validate_weights(lambda);
    const PositionDistribution plus = chirality_kernel(steps, Coin::Plus);
    const PositionDistribution minus = chirality_kernel(steps, Coin::Minus);
    const long long k_lo =
        static_cast<long long>(std::floor(gamma.support_min() * static_cast<double>(n))) - 1;
    const long long k_hi =
        static_cast<long long>(std::ceil(gamma.support_max() * static_cast<double>(n))) + 1;
    double exponent = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const double mean =
            0.5 * gamma(static_cast<double>(k) / static_cast<double>(n));
        if (mean == 0.0) continue;
        double beta_plus = 0.0;  // beta - 1, per coin state
        double beta_minus = 0.0;
        for (const auto& [site, weight] : lambda) {
            const double drop = std::expm1(-weight);
            beta_plus += drop * plus.prob_at(site - k);
            beta_minus += drop * minus.prob_at(site - k);
        }
        exponent += mean * (beta_plus + beta_minus);
    }
    return std::exp(exponent);
}

double LaplaceCheck::z() const {
    if (std_error <= 0.0) return empirical == exact ? 0.0 : HUGE_VAL;
    return (empirical - exact) / std_error;
}

LaplaceCheck laplace_identity(const Profile& gamma, long long n, long long steps,
                              const LaplaceWeights& lambda,
                              std::uint64_t replicas, const RandomSource& src,
                              int threads) {
    if (replicas < 2)
        throw std::invalid_argument("laplace_identity: need >= 2 replicas");
    validate_weights(lambda);

    std::vector<double> values(replicas);
    for_each_replica(replicas, threads, [&](std::uint64_t r) {
        const OccupationField field =
            simulate_occupation(gamma, n, steps, src.substream(r));
        double s = 0.0;
        for (const auto& [site, weight] : lambda)
            s += weight * static_cast<double>(field.count_at(site));
        values[r] = std::exp(-s);
    });

    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(replicas);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(replicas - 1);

    LaplaceCheck check;
    check.empirical = mean;
    check.exact = laplace_exact(gamma, n, steps, lambda);
    check.std_error = std::sqrt(var / static_cast<double>(replicas));
    check.replicas = replicas;
    return check;
}

} // namespace qwalk
