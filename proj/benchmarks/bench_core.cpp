#include "hwm/evolve.hpp"
#include "hwm/exact.hpp"
#include "hwm/lax.hpp"
#include "hwm/linspec.hpp"

#include <benchmark/benchmark.h>

using namespace hwm;

static void BM_Halfwave(benchmark::State& state) {
    const auto g = make_grid(GridKind::torus, static_cast<std::size_t>(state.range(0)));
    const auto u = circle_wave(3, 0.2, 0.0, g);
    std::vector<double> out(g->n);
    for (auto _ : state) {
        apply_multiplier(*g, u.component(0), out, Symbol::halfwave);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Halfwave)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

static void BM_MidpointStep(benchmark::State& state) {
    const auto g = make_grid(GridKind::torus, static_cast<std::size_t>(state.range(0)));
    const auto u = circle_wave(2, 0.5, 0.0, g);
    IntegratorConfig cfg;
    cfg.dt = 0.25 / static_cast<double>(g->k_max());
    for (auto _ : state) benchmark::DoNotOptimize(step_midpoint(u, cfg.dt, cfg));
}
BENCHMARK(BM_MidpointStep)->RangeMultiplier(4)->Range(256, 16384);

static void BM_LaxWindowAssembly(benchmark::State& state) {
    const auto g = make_grid(GridKind::window, static_cast<std::size_t>(state.range(0)), 50.0);
    const auto u = periodic_orbit_field(0.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(lax_L_window(u));
}
BENCHMARK(BM_LaxWindowAssembly)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

static void BM_LaxRandomizedRank(benchmark::State& state) {
    const auto g = make_grid(GridKind::window, static_cast<std::size_t>(state.range(0)), 100.0);
    const auto l = lax_L_window(periodic_orbit_field(0.0, g));
    SchattenOptions opts;
    opts.dense_limit = 0;
    for (auto _ : state) benchmark::DoNotOptimize(numerical_rank(l, 1e-3, opts));
}
BENCHMARK(BM_LaxRandomizedRank)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_LplusClassify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = make_grid(GridKind::window, n, static_cast<double>(n) / 20.0);
    const auto op = assemble_Lplus(1, g);
    ClassifyOptions opts;
    opts.min_n = 0;
    for (auto _ : state) benchmark::DoNotOptimize(classify_spectrum(op, opts));
}
BENCHMARK(BM_LplusClassify)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
