#include <random>

#include <benchmark/benchmark.h>

#include "lightcone/catalog.hpp"
#include "lightcone/curvature.hpp"
#include "lightcone/global.hpp"
#include "lightcone/search.hpp"

using namespace lightcone;

namespace {

HarmonicSpec bench_spec() { return {{{2, 0, 0.05}, {3, 1, -0.03}, {2, -2, 0.02}}}; }

void BM_JetMultiply(benchmark::State& state) {
  const Jet2 a = sin(Jet2::variable(Axis::U, 0.4)) + Jet2::variable(Axis::V, 1.3);
  const Jet2 b = exp(Jet2::variable(Axis::V, -0.2));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiply);

void BM_PointGeometry(benchmark::State& state) {
  const SurfacePatch s = perturbed_sphere(bench_spec());
  for (auto _ : state) benchmark::DoNotOptimize(point_geometry(s, {1.1, 0.7}));
}
BENCHMARK(BM_PointGeometry);

void BM_CompletePointGeometry(benchmark::State& state) {
  const SurfacePatch s = perturbed_sphere(bench_spec());
  for (auto _ : state) benchmark::DoNotOptimize(complete_point_geometry(s, {1.1, 0.7}));
}
BENCHMARK(BM_CompletePointGeometry);

void BM_SphereGrid(benchmark::State& state) {
  const SurfacePatch s = perturbed_sphere(bench_spec());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SphereGrid(s, n, 2 * n).nodes().size());
}
BENCHMARK(BM_SphereGrid)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Lambda1(benchmark::State& state) {
  const SurfacePatch s = perturbed_sphere(bench_spec());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lambda1_discrete(s, n, 2 * n));
}
BENCHMARK(BM_Lambda1)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_KetaObjective(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(keta_variance(bench_spec(), 16, 32));
}
BENCHMARK(BM_KetaObjective)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
