// Throughput of the serial reference kernel against the OpenMP kernel on one
// 2 s block at 2200 Hz. Arg: number of fluxon pairs.

#include <benchmark/benchmark.h>

#include "tflux/diagnostics.hpp"
#include "tflux/population.hpp"
#include "tflux/signal.hpp"

using namespace tflux;

namespace {

struct Setup {
  TransferCurve curve{0.025};
  RotorDynamics dyn;
  FluxonPopulation pop;
  StreamOptions opts;

  explicit Setup(int pairs) {
    dyn.omega_s = 2 * pi * 100;
    dyn.omega_r = 2 * pi / 180;
    dyn.gamma_B = 0.5;
    dyn.alpha = 1e-5;
    dyn.beta0 = 5e-5;
    PopulationSpec spec;
    spec.n_pairs = pairs;
    spec.seed = 5;
    pop = generate_population(spec, curve);
  }
};

template <class Kernel>
void run(benchmark::State& state, Kernel kernel) {
  const Setup s(static_cast<int>(state.range(0)));
  const std::size_t n = s.opts.samples_per_block();
  for (auto _ : state) {
    auto block = kernel(s.pop, s.curve, s.dyn, s.opts, 0, n);
    benchmark::DoNotOptimize(block.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * static_cast<std::int64_t>(s.pop.fluxons.size()));
}

void BM_reference(benchmark::State& state) { run(state, sample_block_reference); }
void BM_parallel(benchmark::State& state) { run(state, sample_block_parallel); }

}  // namespace

BENCHMARK(BM_reference)->Arg(10)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_parallel)->Arg(10)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
