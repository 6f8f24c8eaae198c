#pragma once

// Reproducible randomness. Everything downstream of a (seed, stream) pair
// is deterministic across platforms: engines are seeded through a fixed
// mixing function, uniforms are built from raw engine output with explicit
// arithmetic, and the Poisson sampler avoids the standard library
// distributions, whose algorithms are implementation-defined.

#include <cstdint>
#include <random>

namespace qwalk {

/// splitmix64 finalizer; good avalanche, used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// A named point in seed space. `substream(tag)` derives an independent
/// child source, so replicas and phases can be given stable, collision-free
/// streams without coordinating counters.
struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RandomSource substream(std::uint64_t tag) const;
    std::mt19937_64 engine() const;
};

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& eng);

/// Poisson sample with the given mean. Inversion by sequential search for
/// small means, transformed rejection for large ones; mean 0 returns 0.
std::uint64_t poisson_draw(double mean, std::mt19937_64& eng);

} // namespace qwalk
