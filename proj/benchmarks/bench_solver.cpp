#include <benchmark/benchmark.h>

#include "ratingforge/conditions.hpp"
#include "ratingforge/menu.hpp"
#include "ratingforge/solver.hpp"

namespace {

using namespace ratingforge;

ProblemSpec triangular_spec() {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::triangular(s, 0.5), CostFn::power(2.0),
                             Objective::quality_max());
}

void BM_SolveCutoff(benchmark::State& state) {
    ProblemSpec spec = triangular_spec();
    for (auto _ : state) benchmark::DoNotOptimize(solve_cutoff(spec).theta0);
}
BENCHMARK(BM_SolveCutoff)->Unit(benchmark::kMillisecond);

void BM_ClassifyRegime(benchmark::State& state) {
    ProblemSpec spec = triangular_spec();
    for (auto _ : state) benchmark::DoNotOptimize(classify_regime(spec, 0).value);
}
BENCHMARK(BM_ClassifyRegime)->Unit(benchmark::kMillisecond);

void BM_MenuDp(benchmark::State& state) {
    ProblemSpec spec = triangular_spec();
    auto grid = anchored_quality_grid(spec, 0.3, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dp_optimal_menu(spec, grid).value);
}
BENCHMARK(BM_MenuDp)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
    ProblemSpec spec = triangular_spec();
    auto grid = anchored_quality_grid(spec, 0.3, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_menus(spec, grid).value);
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_CheckS(benchmark::State& state) {
    ProblemSpec spec = triangular_spec();
    for (auto _ : state) {
        CharacteristicCtx ctx(spec, 0.38);
        benchmark::DoNotOptimize(check_S(ctx).S.margin);
    }
}
BENCHMARK(BM_CheckS)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
