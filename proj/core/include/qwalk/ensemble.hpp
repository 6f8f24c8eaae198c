#pragma once

// Finite ensembles of independent walks: Poisson initial data sampled from
// a profile, exact measurement of every walker after a common number of
// steps, occupation-number statistics, and a Monte Carlo check of the
// closed-form Laplace functional of the measured field.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/analytics.hpp"
#include "qwalk/random.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Walker counts at one site, split by initial coin state.
struct SiteOccupancy {
    long long site = 0;
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
};

/// Initial placement of walkers: strictly increasing sites, each holding
/// independent walkers with the given coin states. scale_n records the
/// lattice scale the configuration was sampled at (1 for hand-built ones).
class FieldConfiguration {
public:
    FieldConfiguration() = default;
    explicit FieldConfiguration(std::vector<SiteOccupancy> entries,
                                long long scale_n = 1);

    std::span<const SiteOccupancy> entries() const { return entries_; }
    long long scale_n() const { return scale_n_; }
    bool empty() const { return entries_.empty(); }
    std::uint64_t total_walkers() const;
    std::uint64_t count(long long site, Coin c) const;

private:
    std::vector<SiteOccupancy> entries_;
    long long scale_n_ = 1;
};

/// Occupation counts after measurement: counts[i] walkers found at site
/// offset + i, all evolved for time_steps steps from a configuration at
/// lattice scale scale_n.
struct OccupationField {
    long long offset = 0;
    std::vector<std::uint64_t> counts;
    long long time_steps = 0;
    long long scale_n = 1;

    long long first_site() const { return offset; }
    long long last_site() const {
        return offset + static_cast<long long>(counts.size()) - 1;
    }
    std::uint64_t count_at(long long site) const;
    std::uint64_t total() const;
};

/// Draws the product-Poisson initial data tied to `gamma` at scale n: site k
/// gets independent Poisson(gamma(k/n)/2) walkers in each coin state. Only
/// sites with at least one walker are stored.
FieldConfiguration sample_field(const Profile& gamma, long long n,
                                const RandomSource& src);

/// Inverse-CDF sampler over the support of a position distribution.
class PositionSampler {
public:
    explicit PositionSampler(const PositionDistribution& dist);
    long long sample(std::mt19937_64& eng) const;

private:
    long long offset_;
    std::vector<double> cdf_;
};

/// Evolves every walker of `config` for `steps` steps and measures all
/// positions. Each walker's displacement is an independent draw from the
/// exact position distribution of its coin state.
OccupationField measure_field(const FieldConfiguration& config, long long steps,
                              const RandomSource& src);

/// One full replica: sample initial data from `gamma` at scale n, then
/// measure after `steps` steps. Field and measurement use separate
/// substreams of `src`.
OccupationField simulate_occupation(const Profile& gamma, long long n,
                                    long long steps, const RandomSource& src);

/// Empirical functional (1/n) * sum_j test_fn(j/n) * counts[j].
double empirical_functional(const OccupationField& field,
                            const std::function<double(double)>& test_fn);

/// Frequency table of occupation numbers pooled over samples.
struct CountHistogram {
    std::vector<std::uint64_t> freq;
    std::uint64_t samples = 0;

    void add(std::uint64_t count);
    void merge(const CountHistogram& other);
    /// Empirical pmf freq/samples; throws if no samples were added.
    std::vector<double> pmf() const;
};

/// Occupation-number histogram per offset o in [-half_width, half_width]:
/// result[o] collects count_at(center + o) across the given fields.
std::map<long long, CountHistogram>
window_histogram(std::span<const OccupationField> fields, long long center,
                 long long half_width);

/// Runs body(r) for every replica index r in [0, replicas), statically
/// chunked over `threads` threads. Bodies must touch only per-replica
/// state; results are then reproducible for any thread count.
void for_each_replica(std::uint64_t replicas, int threads,
                      const std::function<void(std::uint64_t)>& body);

/// Test weights for the Laplace functional: (site, weight) pairs with
/// strictly increasing sites and nonnegative finite weights.
using LaplaceWeights = std::vector<std::pair<long long, double>>;

/// Closed-form value of E[exp(-sum_j lambda(j) eta(j))] for the measured
/// Poisson field: exp of sum_k gamma(k/n)/2 times the two per-coin factors
/// (beta - 1), each a kernel-weighted sum of expm1(-lambda).
double laplace_exact(const Profile& gamma, long long n, long long steps,
                     const LaplaceWeights& lambda);

struct LaplaceCheck {
    double empirical = 0.0;
    double exact = 0.0;
    double std_error = 0.0;
    std::uint64_t replicas = 0;

    /// Studentized deviation of the Monte Carlo mean from the exact value.
    double z() const;
};

/// Monte Carlo estimate of the Laplace functional over independent
/// replicas, compared against the closed form.
LaplaceCheck laplace_identity(const Profile& gamma, long long n, long long steps,
                              const LaplaceWeights& lambda,
                              std::uint64_t replicas, const RandomSource& src,
                              int threads = 1);

} // namespace qwalk
