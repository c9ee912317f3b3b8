#include <benchmark/benchmark.h>

#include "spinspec/bounds.hpp"
#include "spinspec/spectrum.hpp"

using namespace spinspec;

static void BM_AssembleMode(benchmark::State& state) {
  const auto grid = RadialGrid::make(WarpedSurface::hemisphere(), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto op = apply_boundary_condition(assemble_mode_dirac(grid, FourierMode(1)),
                                       BoundaryCondition::local_plus);
    benchmark::DoNotOptimize(op.diagonal().data());
  }
}
BENCHMARK(BM_AssembleMode)->Arg(256)->Arg(1024);

static void BM_SolveMode(benchmark::State& state) {
  const auto op = apply_boundary_condition(
      assemble_mode_dirac(WarpedSurface::hemisphere(), FourierMode(1), static_cast<int>(state.range(0))),
      BoundaryCondition::local_plus);
  for (auto _ : state) {
    auto pairs = solve_spectrum(op, 1);
    benchmark::DoNotOptimize(pairs.front().lambda);
  }
}
BENCHMARK(BM_SolveMode)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_Aggregate(benchmark::State& state) {
  const auto surface = WarpedSurface::disk();
  for (auto _ : state) {
    auto s = aggregate(surface, BoundaryCondition::local_plus, 12.5, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(s.lambda_min());
  }
}
BENCHMARK(BM_Aggregate)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_OptimizerEvaluations(benchmark::State& state) {
  const auto surface = WarpedSurface::spherical_cap(1.0);
  const auto grid = RadialGrid::make(surface, 256);
  for (auto _ : state) {
    auto r = optimize_modifiers(*surface, FeasibilityVariant::interior, 200, grid->centers);
    benchmark::DoNotOptimize(r.achieved);
  }
}
BENCHMARK(BM_OptimizerEvaluations)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
