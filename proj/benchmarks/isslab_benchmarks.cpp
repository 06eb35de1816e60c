#include <cmath>
#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "isslab/certificates.hpp"
#include "isslab/iss_bounds.hpp"
#include "isslab/solver.hpp"
#include "isslab/transforms.hpp"

using namespace isslab;
using std::numbers::pi;

namespace {

PdeProblem heat(std::size_t cells) {
  PdeProblem p;
  p.grid = SpatialGrid(cells);
  p.c = CoefficientField::of_state(ScalarFunction::sine(1.0, 2.0));
  p.initial = GridProfile::sample(p.grid, [](double x) { return std::sin(pi * x); });
  return p;
}

void BM_SpatialOperator(benchmark::State& state) {
  const auto p = heat(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(step_spatial_operator(p, 0.0, p.initial));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpatialOperator)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_IntegrateHeat(benchmark::State& state) {
  auto p = heat(static_cast<std::size_t>(state.range(0)));
  p.horizon = 0.01;
  SolverConfig c;
  c.output_times = SolverConfig::uniform_times(p.horizon, 1);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p, c));
}
BENCHMARK(BM_IntegrateHeat)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CheckCertificate(benchmark::State& state) {
  CoefficientBounds b;
  b.a = {0.5, 2.0};
  b.b = {-0.5, 0.5};
  b.c = {-1.0, 1.0};
  const auto w = WeightFunction::sine(2.5, 0.3);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_certificate(b, w, 1.0, 0.0, grid));
}
BENCHMARK(BM_CheckCertificate)->RangeMultiplier(8)->Range(64, 4096);

void BM_FadingMemoryTracker(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> g(4096);
  for (double& v : g) v = u(rng);
  for (auto _ : state) {
    FadingMemoryTracker t(2.0);
    for (std::size_t i = 0; i < g.size(); ++i) t.update(1e-3 * static_cast<double>(i), g[i]);
    benchmark::DoNotOptimize(t.value());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_FadingMemoryTracker);

void BM_GammaTableBuild(benchmark::State& state) {
  TransformSpec s;
  s.kappa = ScalarFunction::constant(1.0);
  s.g = ScalarFunction::constant(1.0);
  s.u_lo = -3.0;
  s.u_hi = 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(GammaTable::build(s));
}
BENCHMARK(BM_GammaTableBuild)->Unit(benchmark::kMillisecond);

void BM_GammaInverse(benchmark::State& state) {
  TransformSpec s;
  s.g = ScalarFunction::constant(1.0);
  s.u_lo = -3.0;
  s.u_hi = 3.0;
  const auto t = GammaTable::build(s);
  double w = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.gamma_inverse(w));
    w = w > 15.0 ? -0.9 : w + 0.01;
  }
}
BENCHMARK(BM_GammaInverse);

}  // namespace

BENCHMARK_MAIN();
