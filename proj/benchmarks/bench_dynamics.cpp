#include <benchmark/benchmark.h>

#include "qdarp/ensemble.hpp"
#include "qdarp/sweep.hpp"

using namespace qdarp;

static void BM_EvolveResonant(benchmark::State& state) {
  const PulseSpec p{0.12, 1.0, 1063.0, 0.0};
  const QuantumDot q{1063.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p, q).occupation);
}
BENCHMARK(BM_EvolveResonant);

static void BM_EvolveARP(benchmark::State& state) {
  const PulseSpec p{0.12, 3.0, 1063.0, 0.3};
  const QuantumDot q{1067.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p, q).occupation);
}
BENCHMARK(BM_EvolveARP)->Unit(benchmark::kMillisecond);

// One sweep cell: 468 dots at the given chirp (in units of 1e-3 ps^2).
static void BM_EnsembleCell(benchmark::State& state) {
  EnsembleSpec spec;
  const auto ens = sample_ensemble(spec);
  const PulseSpec p{0.12, 2.5, 1063.0, state.range(0) * 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(mean_occupation(ens, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ens.dots.size()));
}
BENCHMARK(BM_EnsembleCell)->Arg(0)->Arg(18)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_SmallSweep(benchmark::State& state) {
  EnsembleSpec spec;
  spec.n_dots = 52;
  const SweepGrid grid{SweepGrid::linspace(0.0, 0.06, 4), SweepGrid::linspace(0.0, 5.0, 4)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(occupation_map(grid, spec, {0.12, 0.0, 1063.0, 0.0}, {}, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_SmallSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
