#include <benchmark/benchmark.h>

#include "qwalk/analytics.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/random.hpp"
#include "qwalk/stats.hpp"
#include "qwalk/walk.hpp"

namespace {

void BM_Evolve(benchmark::State& state) {
    const long long n = state.range(0);
    for (auto _ : state) {
        auto s = qwalk::evolve(qwalk::from_localized(0, qwalk::Coin::Plus), n);
        benchmark::DoNotOptimize(s.plus.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_Evolve)->Arg(256)->Arg(1024)->Arg(4096)->Complexity();

void BM_AveragedKernel(benchmark::State& state) {
    const long long n = state.range(0);
    for (auto _ : state) {
        auto k = qwalk::averaged_kernel(n);
        benchmark::DoNotOptimize(k.probs.data());
    }
}
BENCHMARK(BM_AveragedKernel)->Arg(256)->Arg(1024);

void BM_Rho(benchmark::State& state) {
    const auto gamma = qwalk::Profile::triangle(0.0, 0.5, 1.0);
    double x = -0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qwalk::limit_profile(gamma, 1.0, x));
        x += 1e-4;
        if (x > 0.9) x = -0.9;
    }
}
BENCHMARK(BM_Rho);

void BM_IntensityB(benchmark::State& state) {
    const long long n = state.range(0);
    const auto gamma = qwalk::Profile::triangle(0.0, 0.5, 1.0);
    const auto kernel = qwalk::averaged_kernel(n);
    long long j = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qwalk::poisson_intensity(gamma, n, kernel, j));
        j = (j + 7) % (n / 2);
    }
}
BENCHMARK(BM_IntensityB)->Arg(256)->Arg(1024);

void BM_PoissonDraw(benchmark::State& state) {
    const double mean = static_cast<double>(state.range(0)) / 10.0;
    auto eng = qwalk::RandomSource{42, 0}.engine();
    for (auto _ : state)
        benchmark::DoNotOptimize(qwalk::poisson_draw(mean, eng));
}
BENCHMARK(BM_PoissonDraw)->Arg(3)->Arg(30)->Arg(500);

void BM_SimulateReplica(benchmark::State& state) {
    const long long n = state.range(0);
    const auto gamma = qwalk::Profile::triangle(0.0, 0.5, 1.0);
    const qwalk::RandomSource src{42, 0};
    std::uint64_t r = 0;
    for (auto _ : state) {
        auto field = qwalk::simulate_occupation(gamma, n, n, src.substream(r++));
        benchmark::DoNotOptimize(field.counts.data());
    }
}
BENCHMARK(BM_SimulateReplica)->Arg(64)->Arg(512);

} // namespace

BENCHMARK_MAIN();
