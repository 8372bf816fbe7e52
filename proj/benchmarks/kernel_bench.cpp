#include <benchmark/benchmark.h>

#include "hslab/conformal_bridge.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/verify.hpp"

namespace {

using namespace hslab;

void BM_GreenQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double r = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_G(r, n));
    r = r < 0.9 ? r * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_GreenQuadrature)->Arg(3)->Arg(5)->Arg(7);

void BM_GreenTableBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(GreenTable(5, 1e-6, 0.99));
}
BENCHMARK(BM_GreenTableBuild)->Unit(benchmark::kMillisecond);

void BM_GreenTableLookup(benchmark::State& state) {
  const GreenTable table(5, 1e-6, 0.99);
  double r = 1e-5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.V(r, 2.0));
    r = r < 0.9 ? r * 1.01 : 1e-5;
  }
}
BENCHMARK(BM_GreenTableLookup);

void BM_HyperbolicScaling(benchmark::State& state) {
  const auto g = RadialGrid::with_density(5e-3, 0.7, static_cast<double>(state.range(0)));
  const auto u = random_bump(1, 0, g, 1e-2, 0.6);
  const auto target = scaled_support_grid(g, 2.0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(hyperbolic_scaling(u, 2.0, 5, target));
}
BENCHMARK(BM_HyperbolicScaling)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Lambda0(benchmark::State& state) {
  const EuclideanProblem pb(ProblemParams{}, 0.5);
  Lambda0Options o;
  o.nodes_per_decade = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coercivity_lambda0(pb, o));
}
BENCHMARK(BM_Lambda0)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_HardySweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hardy_sweep(5, 20240101, 10));
}
BENCHMARK(BM_HardySweep)->Unit(benchmark::kMillisecond);

}  // namespace
