#include <benchmark/benchmark.h>

#include "mfgs/hamiltonian.hpp"

#include <random>
#include <vector>

using namespace mfgs;

namespace {

std::vector<std::array<double, 2>> sample_points(std::size_t n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {dist(rng), dist(rng)};
    return pts;
}

} // namespace

static void EvalH(benchmark::State& state) {
    HamiltonianSpec spec;
    spec.gamma = static_cast<double>(state.range(0)) / 10.0;
    auto pts = sample_points(4096);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& p = pts[k++ & 4095];
        benchmark::DoNotOptimize(eval_h(spec, std::span<const double>(p.data(), 2)));
    }
}
BENCHMARK(EvalH)->Arg(15)->Arg(20)->Arg(30);

static void EvalLClosedForm(benchmark::State& state) {
    HamiltonianSpec spec;
    spec.gamma = static_cast<double>(state.range(0)) / 10.0;
    auto pts = sample_points(4096);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& q = pts[k++ & 4095];
        benchmark::DoNotOptimize(eval_l(spec, std::span<const double>(q.data(), 2)));
    }
}
BENCHMARK(EvalLClosedForm)->Arg(15)->Arg(20)->Arg(30);

static void EvalLGoldenSection(benchmark::State& state) {
    HamiltonianSpec spec;
    spec.gamma = 3.0;
    auto pts = sample_points(4096);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& q = pts[k++ & 4095];
        benchmark::DoNotOptimize(
            eval_l_numeric(spec, std::span<const double>(q.data(), 2)));
    }
}
BENCHMARK(EvalLGoldenSection);

static void KineticDensity(benchmark::State& state) {
    HamiltonianSpec spec;
    auto pts = sample_points(4096);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& w = pts[k++ & 4095];
        benchmark::DoNotOptimize(
            kinetic_density(spec, 0.5, std::span<const double>(w.data(), 2)));
    }
}
BENCHMARK(KineticDensity);

BENCHMARK_MAIN();
