#include <benchmark/benchmark.h>

#include "edgeoffload/model.hpp"
#include "edgeoffload/sim.hpp"

using namespace edgeoffload;

static void BM_ReplicationSlots(benchmark::State& state) {
  SimConfig cfg;
  cfg.params = ModelParams::uniform_arrivals(10, 2000, 0.1, 0.5, 1.0 / 11.0, 1.0, 3.0);
  cfg.policy = PolicySpec::threshold(3);
  cfg.replications = 1;
  cfg.base_seed = 42;
  cfg.initial_state = SystemState(10);
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.params.horizon);
}
BENCHMARK(BM_ReplicationSlots)->Unit(benchmark::kMillisecond);

static void BM_CounterRng(benchmark::State& state) {
  CounterRng rng(7, 3);
  std::uint64_t slot = 0;
  double acc = 0;
  for (auto _ : state) {
    acc += rng.uniform(slot++, 1);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_CounterRng);

BENCHMARK_MAIN();
