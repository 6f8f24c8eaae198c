#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qwalk/walk.hpp"
#include "support/dense_walk_oracle.hpp"

using qwalk::Coin;

namespace {
constexpr double kInvSqrt2 = std::numbers::inv_sqrt2;
}

TEST_SUITE("walk") {

TEST_CASE("localized states") {
    const auto s = qwalk::from_localized(0, Coin::Plus);
    CHECK(s.steps_taken == 0);
    CHECK(s.first_site() == 0);
    CHECK(s.last_site() == 0);
    CHECK(s.amplitude(0, Coin::Plus) == qwalk::Amplitude{1.0, 0.0});
    CHECK(s.amplitude(0, Coin::Minus) == qwalk::Amplitude{0.0, 0.0});
    CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-15));

    const auto m = qwalk::from_localized(-3, Coin::Minus);
    CHECK(m.amplitude(-3, Coin::Minus) == qwalk::Amplitude{1.0, 0.0});
    CHECK(m.total_probability() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single step from each coin state") {
    const auto p = qwalk::step(qwalk::from_localized(0, Coin::Plus));
    CHECK(p.steps_taken == 1);
    CHECK(p.amplitude(1, Coin::Plus).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(p.amplitude(-1, Coin::Minus).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(p.amplitude(1, Coin::Minus) == qwalk::Amplitude{0.0, 0.0});
    CHECK(p.amplitude(-1, Coin::Plus) == qwalk::Amplitude{0.0, 0.0});

    const auto m = qwalk::step(qwalk::from_localized(0, Coin::Minus));
    CHECK(m.amplitude(1, Coin::Plus).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(m.amplitude(-1, Coin::Minus).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));
}

TEST_CASE("two steps, amplitudes by hand") {
    const auto s = qwalk::evolve(qwalk::from_localized(0, Coin::Plus), 2);
    CHECK(s.amplitude(2, Coin::Plus).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.amplitude(0, Coin::Plus).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.amplitude(0, Coin::Minus).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.amplitude(-2, Coin::Minus).real() == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("evolve basics") {
    const auto s0 = qwalk::from_localized(4, Coin::Minus);
    const auto same = qwalk::evolve(s0, 0);
    CHECK(same.offset == s0.offset);
    CHECK(same.plus == s0.plus);
    CHECK(same.minus == s0.minus);
    CHECK_THROWS_AS(qwalk::evolve(s0, -1), std::invalid_argument);

    const auto a = qwalk::evolve(qwalk::from_localized(0, Coin::Plus), 2);
    const auto b = qwalk::step(qwalk::step(qwalk::from_localized(0, Coin::Plus)));
    CHECK(a.plus == b.plus);
    CHECK(a.minus == b.minus);
}

TEST_CASE("small position distributions") {
    const auto d2 = qwalk::position_distribution(
        qwalk::evolve(qwalk::from_localized(0, Coin::Plus), 2));
    CHECK(d2.prob_at(-2) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(d2.prob_at(0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(d2.prob_at(2) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(d2.prob_at(1) == 0.0);

    const auto d3 = qwalk::position_distribution(
        qwalk::evolve(qwalk::from_localized(0, Coin::Plus), 3));
    CHECK(d3.prob_at(-3) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(d3.prob_at(-1) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(d3.prob_at(1) == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(d3.prob_at(3) == doctest::Approx(0.125).epsilon(1e-13));

    // Minus start is the mirror image.
    const auto m3 = qwalk::position_distribution(
        qwalk::evolve(qwalk::from_localized(0, Coin::Minus), 3));
    CHECK(m3.prob_at(-1) == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(m3.prob_at(3) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(m3.prob_at(-3) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(m3.prob_at(1) == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("dense matrix oracle, n <= 12, both coin starts") {
    const long long max_n = 12;
    const testsupport::DenseWalkOracle oracle(max_n);
    for (const Coin c : {Coin::Plus, Coin::Minus}) {
        for (long long n = 0; n <= max_n; ++n) {
            const auto state = qwalk::evolve(qwalk::from_localized(0, c), n);
            const auto v = oracle.evolve(0, c, n);
            for (long long s = oracle.first_site(); s <= oracle.last_site(); ++s) {
                const auto ap = v[oracle.index(s, Coin::Plus)];
                const auto am = v[oracle.index(s, Coin::Minus)];
                CHECK(std::abs(state.amplitude(s, Coin::Plus) - ap) < 1e-12);
                CHECK(std::abs(state.amplitude(s, Coin::Minus) - am) < 1e-12);
            }
            const auto dist = qwalk::position_distribution(state);
            const auto ref = oracle.pmf(v);
            for (long long s = oracle.first_site(); s <= oracle.last_site(); ++s)
                CHECK(std::abs(dist.prob_at(s) -
                               ref[static_cast<std::size_t>(
                                   s - oracle.first_site())]) < 1e-12);
        }
    }
}

TEST_CASE("unitarity and exact parity at moderate depth") {
    const long long n = 2001;
    const auto s = qwalk::evolve(qwalk::from_localized(5, Coin::Plus), n);
    CHECK(std::abs(s.total_probability() - 1.0) < 1e-10);
    // Sites with the wrong parity hold exact zeros, not small numbers.
    for (long long j = s.first_site(); j <= s.last_site(); ++j) {
        if ((j - 5 + n) % 2 != 0) {
            CHECK(s.amplitude(j, Coin::Plus) == qwalk::Amplitude{0.0, 0.0});
            CHECK(s.amplitude(j, Coin::Minus) == qwalk::Amplitude{0.0, 0.0});
        }
    }
}

TEST_CASE("translation covariance is exact") {
    const long long n = 57;
    const auto base = qwalk::position_distribution(
        qwalk::evolve(qwalk::from_localized(0, Coin::Minus), n));
    const auto shifted = qwalk::position_distribution(
        qwalk::evolve(qwalk::from_localized(7, Coin::Minus), n));
    REQUIRE(shifted.probs.size() == base.probs.size());
    CHECK(shifted.offset == base.offset + 7);
    for (std::size_t i = 0; i < base.probs.size(); ++i)
        CHECK(shifted.probs[i] == base.probs[i]);  // bitwise
}

TEST_CASE("mirror relation and kernel evenness") {
    for (long long n = 0; n <= 40; ++n) {
        const auto plus = qwalk::chirality_kernel(n, Coin::Plus);
        const auto minus = qwalk::chirality_kernel(n, Coin::Minus);
        const auto avg = qwalk::averaged_kernel(n);
        for (long long m = -n; m <= n; ++m) {
            CHECK(std::abs(plus.prob_at(m) - minus.prob_at(-m)) < 1e-12);
            CHECK(std::abs(avg.prob_at(m) - avg.prob_at(-m)) < 1e-12);
        }
        CHECK(avg.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("averaged kernel small cases") {
    const auto k0 = qwalk::averaged_kernel(0);
    CHECK(k0.probs.size() == 1);
    CHECK(k0.prob_at(0) == 1.0);

    const auto k3 = qwalk::averaged_kernel(3);
    CHECK(k3.prob_at(3) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(k3.prob_at(-3) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(k3.prob_at(1) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(k3.prob_at(-1) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK_THROWS_AS(qwalk::chirality_kernel(-1, Coin::Plus),
                    std::invalid_argument);
}

} // TEST_SUITE
