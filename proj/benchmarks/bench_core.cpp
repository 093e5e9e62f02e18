#include <benchmark/benchmark.h>

#include <random>

#include "sgrlab/bounds.hpp"
#include "sgrlab/experiments.hpp"
#include "sgrlab/simulation.hpp"
#include "sgrlab/spectral.hpp"

using namespace sgrlab;

namespace {

ModelSpec leslie_pair() {
  Vector pi(2);
  pi << 0.5, 0.5;
  return leslie2_iid_model({{0.55, 1.35, 0.45}, {0.9, 0.4, 0.7}}, pi);
}

ModelSpec dense_pair(int n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return ProjectionMatrix(m);
  };
  Vector pi(2);
  pi << 0.3, 0.7;
  return ModelSpec(EnvironmentSet({draw(), draw()}), EnvironmentChain::iid(pi));
}

}  // namespace

static void BM_SpectralRadius(benchmark::State& state) {
  const ModelSpec m = dense_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m.envs()[0]));
}
BENCHMARK(BM_SpectralRadius)->Arg(2)->Arg(4)->Arg(16)->Arg(64);

static void BM_TrajectoryLeslie(benchmark::State& state) {
  const ModelSpec m = leslie_pair();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_log_growth(m, state.range(0), 100, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrajectoryLeslie)->Arg(600)->Arg(6000);

static void BM_TrajectoryDense(benchmark::State& state) {
  const ModelSpec m = dense_pair(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_log_growth(m, 600, 100, ++seed));
  state.SetItemsProcessed(state.iterations() * 600);
}
BENCHMARK(BM_TrajectoryDense)->Arg(3)->Arg(8);

static void BM_AllBoundsLeslie(benchmark::State& state) {
  const ModelSpec m = leslie_pair();
  for (auto _ : state) benchmark::DoNotOptimize(all_bounds(m));
}
BENCHMARK(BM_AllBoundsLeslie);

static void BM_SweepSmallGrid(benchmark::State& state) {
  SweepGrid g;
  g.pi1_values = {0.5};
  g.step = 1.2;
  SimParams sim;
  sim.samples = 20;
  sim.steps = 200;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_winners(g, sim, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SweepSmallGrid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
