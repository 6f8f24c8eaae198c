#include "qwalk/random.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RandomSource RandomSource::substream(std::uint64_t tag) const {
    return RandomSource{seed, mix64(stream ^ mix64(tag + 0x51ed270b31f0a4a1ull))};
}

std::mt19937_64 RandomSource::engine() const {
    const std::uint64_t a = mix64(seed ^ 0x8497d34a1d3bfbb3ull);
    const std::uint64_t b = mix64(a ^ stream);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

namespace {

// Inversion by sequential search; fine for small means.
std::uint64_t poisson_inversion(double mean, std::mt19937_64& eng) {
    const double u = uniform01(eng);
    double p = std::exp(-mean);
    double cum = p;
    std::uint64_t k = 0;
    // Cap far beyond any realistic quantile so float dust cannot loop forever.
    const std::uint64_t cap =
        static_cast<std::uint64_t>(mean + 12.0 * std::sqrt(mean) + 60.0);
    while (u > cum && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
    }
    return k;
}

// Hormann's transformed rejection with squeeze; valid for mean >= 10,
// used here for mean >= 30. Expected iterations per draw are close to 1.
std::uint64_t poisson_ptrs(double mean, std::mt19937_64& eng) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform01(eng) - 0.5;
        const double v = uniform01(eng);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * loglam - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

} // namespace

std::uint64_t poisson_draw(double mean, std::mt19937_64& eng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_draw: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(mean, eng);
    return poisson_ptrs(mean, eng);
}

} // namespace qwalk
