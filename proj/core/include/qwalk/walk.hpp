#pragma once

// Exact evolution of a single Hadamard-coined walk on the integer line.
//
// A state lives on a finite window of sites and carries one complex
// amplitude per (site, coin) pair. One step applies the Hadamard coin
// followed by the coin-conditioned shift, so the window grows by one
// site on each side per step. No renormalization is ever applied; the
// tests assert that unitarity drift stays tiny instead.

#include <complex>
#include <cstdint>
#include <vector>

namespace qwalk {

using Amplitude = std::complex<double>;

/// Coin basis states. Plus shifts right, Minus shifts left.
enum class Coin : std::uint8_t { Plus, Minus };

/// Amplitudes of one walker over a contiguous site window
/// [offset, offset + size - 1], split by coin component.
struct SpinorState {
    long long offset = 0;
    std::vector<Amplitude> plus;
    std::vector<Amplitude> minus;
    long long steps_taken = 0;

    long long size() const { return static_cast<long long>(plus.size()); }
    long long first_site() const { return offset; }
    long long last_site() const { return offset + size() - 1; }
    bool contains(long long site) const {
        return site >= first_site() && site <= last_site();
    }

    Amplitude amplitude(long long site, Coin c) const {
        if (!contains(site)) return {};
        const auto i = static_cast<std::size_t>(site - offset);
        return c == Coin::Plus ? plus[i] : minus[i];
    }

    /// Sum of |amplitude|^2 over the whole window; 1 up to rounding drift.
    double total_probability() const;
};

/// Probability mass over a contiguous site window.
struct PositionDistribution {
    long long offset = 0;
    std::vector<double> probs;

    long long size() const { return static_cast<long long>(probs.size()); }
    long long first_site() const { return offset; }
    long long last_site() const { return offset + size() - 1; }

    double prob_at(long long site) const {
        if (site < first_site() || site > last_site()) return 0.0;
        return probs[static_cast<std::size_t>(site - offset)];
    }

    double total() const;
};

/// Walker localized at one site with a definite coin, zero steps taken.
SpinorState from_localized(long long site, Coin coin);

/// One application of the walk unitary: coin then shift. For every site k,
///   plus'[k+1]  = (plus[k] + minus[k]) / sqrt(2)
///   minus'[k-1] = (plus[k] - minus[k]) / sqrt(2)
SpinorState step(const SpinorState& state);

/// n applications of step; evolve(s, 0) == s.
SpinorState evolve(SpinorState state, long long n);

/// Measurement law: prob[site] = |plus[site]|^2 + |minus[site]|^2.
PositionDistribution position_distribution(const SpinorState& state);

/// Distribution after `steps` steps for a walker started at site 0 with
/// the given coin. p_c(0, m) in kernel notation; p_c(k, j) = p_c(0, j-k).
PositionDistribution chirality_kernel(long long steps, Coin coin);

/// Equal-weight mixture of the two chirality kernels started at site 0.
/// Even in the site argument; this is the kernel that drives the Poisson
/// intensity of the measured occupation field.
PositionDistribution averaged_kernel(long long steps);

} // namespace qwalk
