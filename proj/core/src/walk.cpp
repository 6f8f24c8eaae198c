#include "qwalk/walk.hpp"

#include <numbers>
#include <stdexcept>

namespace qwalk {

namespace {
constexpr double kInvSqrt2 = std::numbers::inv_sqrt2;
} // namespace

double SpinorState::total_probability() const {
    double sum = 0.0;
    for (const auto& a : plus) sum += std::norm(a);
    for (const auto& a : minus) sum += std::norm(a);
    return sum;
}

double PositionDistribution::total() const {
    double sum = 0.0;
    for (double p : probs) sum += p;
    return sum;
}

SpinorState from_localized(long long site, Coin coin) {
    SpinorState s;
    s.offset = site;
    s.plus.assign(1, coin == Coin::Plus ? Amplitude{1.0, 0.0} : Amplitude{});
    s.minus.assign(1, coin == Coin::Minus ? Amplitude{1.0, 0.0} : Amplitude{});
    s.steps_taken = 0;
    return s;
}

SpinorState step(const SpinorState& state) {
    const auto w = static_cast<std::size_t>(state.size());
    SpinorState next;
    next.offset = state.offset - 1;
    next.steps_taken = state.steps_taken + 1;
    next.plus.assign(w + 2, Amplitude{});
    next.minus.assign(w + 2, Amplitude{});
    // Site state.offset + i maps to index i + 1 in the widened window.
    for (std::size_t i = 0; i < w; ++i) {
        const Amplitude up = state.plus[i];
        const Amplitude down = state.minus[i];
        next.plus[i + 2] += (up + down) * kInvSqrt2;
        next.minus[i] += (up - down) * kInvSqrt2;
    }
    return next;
}

SpinorState evolve(SpinorState state, long long n) {
    if (n < 0) throw std::invalid_argument("evolve: negative step count");
    for (long long i = 0; i < n; ++i) state = step(state);
    return state;
}

PositionDistribution position_distribution(const SpinorState& state) {
    PositionDistribution d;
    d.offset = state.offset;
    d.probs.resize(state.plus.size());
    for (std::size_t i = 0; i < state.plus.size(); ++i) {
        d.probs[i] = std::norm(state.plus[i]) + std::norm(state.minus[i]);
    }
    return d;
}

PositionDistribution chirality_kernel(long long steps, Coin coin) {
    return position_distribution(evolve(from_localized(0, coin), steps));
}

PositionDistribution averaged_kernel(long long steps) {
    const PositionDistribution up = chirality_kernel(steps, Coin::Plus);
    const PositionDistribution down = chirality_kernel(steps, Coin::Minus);
    PositionDistribution q;
    q.offset = up.offset;
    q.probs.resize(up.probs.size());
    for (std::size_t i = 0; i < q.probs.size(); ++i) {
        q.probs[i] = 0.5 * (up.probs[i] + down.probs[i]);
    }
    return q;
}

} // namespace qwalk
