#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <degenpde/ode.hpp>
#include <degenpde/params.hpp>
#include <degenpde/solver.hpp>
#include <degenpde/tridiagonal.hpp>

using namespace degenpde;

namespace {

ProblemParams pme() {
    ProblemParams p;
    p.k = 1;
    p.m = 2;
    p.p = 2;
    p.beta = 5;
    p.a = 0.5;
    return p;
}

void BM_ThomasSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    std::vector<double> lo(n - 1), di(n, 2.5), up(n - 1), rhs(n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lo[i] = off(rng);
        up[i] = off(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(thomas_solve(lo, di, up, rhs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ThomasSolve)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_PicardStep(benchmark::State& state) {
    const ProblemParams pr = pme();
    const DerivedConstants d = derive(pr);
    const Grid g = make_grid(static_cast<int>(state.range(0)), 4.0, pr);
    const GridState init = initial_condition(d, pr.a, 1.0, g);
    SolverConfig c;
    for (auto _ : state) benchmark::DoNotOptimize(picard_step(d, g, init, c.dt, c));
}
BENCHMARK(BM_PicardStep)->Arg(200)->Arg(400)->Arg(1600);

void BM_NearFrontTrajectory(benchmark::State& state) {
    const DerivedConstants d = derive(pme());
    const OdeRhs rhs = [&](double eta, double w, double z) { return near_front_rhs(d, 0.5, {eta, w, z}); };
    const OdeState start{5.0, 1.0, near_front_rest_z(d, 1.0)};
    for (auto _ : state) benchmark::DoNotOptimize(integrate_system(rhs, start, 12.0, 1e-9));
}
BENCHMARK(BM_NearFrontTrajectory);

}  // namespace

BENCHMARK_MAIN();
