#include <benchmark/benchmark.h>

#include "mfgs/solver.hpp"

#include <cmath>

using namespace mfgs;

namespace {

Domain domain_1d(int n) { return Domain{1, 8.0, n, Boundary::NoFlux}; }

Field quadratic_well(const Domain& d) {
    Field u(d);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = d.cell_center(static_cast<int>(i));
        u[i] = 0.3 * x * x;
    }
    return u;
}

} // namespace

static void FpStationary1d(benchmark::State& state) {
    Domain d = domain_1d(static_cast<int>(state.range(0)));
    HamiltonianSpec ham;
    Field u = quadratic_well(d);
    for (auto _ : state) benchmark::DoNotOptimize(solve_fp_stationary(u, ham));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FpStationary1d)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

static void FpStationary2d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Domain d{2, 6.0, n, Boundary::NoFlux};
    HamiltonianSpec ham;
    Field u(d);
    double x[2];
    for (std::size_t i = 0; i < u.size(); ++i) {
        d.coords(i, x);
        u[i] = 0.3 * (x[0] * x[0] + x[1] * x[1]);
    }
    for (auto _ : state) benchmark::DoNotOptimize(solve_fp_stationary(u, ham));
}
BENCHMARK(FpStationary2d)->Arg(32)->Arg(64)->Arg(96);

static void HjbErgodic1d(benchmark::State& state) {
    Domain d = domain_1d(static_cast<int>(state.range(0)));
    HamiltonianSpec ham;
    SolverConfig cfg;
    cfg.fixed_point_tol = 1e-10;
    Field rhs(d);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double x = d.cell_center(static_cast<int>(i));
        rhs[i] = 1.0 + 0.2 * x * x;
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_hjb_ergodic(rhs, ham, cfg));
}
BENCHMARK(HjbErgodic1d)->Arg(256)->Arg(512)->Arg(1024);
