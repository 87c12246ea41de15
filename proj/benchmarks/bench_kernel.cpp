#include <benchmark/benchmark.h>

#include <vector>

#include "gcomp/estimators.hpp"
#include "gcomp/fixtures.hpp"
#include "gcomp/limits.hpp"
#include "gcomp/quadrature.hpp"
#include "gcomp/sampling.hpp"

using namespace gcomp;

namespace {

Variant variant_arg(const benchmark::State& state) { return static_cast<Variant>(state.range(0)); }

void BM_DrawGeneration(benchmark::State& state) {
  const VectorSet set = fixture("x_plus");
  std::size_t r = 0;
  for (auto _ : state) {
    NormalStream stream(SeedPlan::kDefaultSeed, r++);
    benchmark::DoNotOptimize(make_draw(set, 5, stream));
  }
}
BENCHMARK(BM_DrawGeneration);

void BM_KernelAllRoutes(benchmark::State& state) {
  const VectorSet set = fixture("x_plus");
  const ModelParams p = make_params(set, variant_arg(state), 5, 3.0, 1, 0.1);
  const DrawKernel kernel(set, p);
  NormalStream stream(SeedPlan::kDefaultSeed, 0);
  const ReplicationDraw draw = make_draw(set, 5, stream);
  std::vector<double> scratch;
  for (auto _ : state) {
    const InterpolationState st = interpolation_state(draw, p, 0.5);
    benchmark::DoNotOptimize(kernel.psi(st));
    benchmark::DoNotOptimize(kernel.dpsi_standard(draw, st, scratch));
    benchmark::DoNotOptimize(kernel.dpsi_computed(st, scratch));
  }
}
BENCHMARK(BM_KernelAllRoutes)
    ->Arg(static_cast<int>(Variant::Spherical))
    ->Arg(static_cast<int>(Variant::General))
    ->Arg(static_cast<int>(Variant::Lifted));

void BM_PairedRunCurve(benchmark::State& state) {
  const VectorSet set = fixture("x_plus");
  const ModelParams p = make_params(set, Variant::Spherical, 5, 3.0, 1);
  const CurveFunctional f(set, p);
  const std::vector<double> grid = make_grid(0.0, 1.0, 0.05);
  const SeedPlan plan{SeedPlan::kDefaultSeed, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(paired_run(set, 5, plan, grid, f, {1}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PairedRunCurve)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_InterpolatedMax(benchmark::State& state) {
  const VectorSet set = fixture("x_plus");
  const SeedPlan plan{SeedPlan::kDefaultSeed, 4096};
  for (auto _ : state) benchmark::DoNotOptimize(interpolated_max(set, 5, 1, 0.5, plan, false, {1}));
}
BENCHMARK(BM_InterpolatedMax)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
