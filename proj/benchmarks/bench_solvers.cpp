#include <benchmark/benchmark.h>

#include "edgeoffload/dp.hpp"
#include "edgeoffload/lean_table.hpp"
#include "edgeoffload/model.hpp"

using namespace edgeoffload;

static void BM_LazySolveHorizon(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::uniform_arrivals(3, horizon, 0.7, 0.7, 0.5, 1.0, 3.0);
  for (auto _ : state) {
    DpSolver solver(p);
    benchmark::DoNotOptimize(solver.value({0, 1, 1}, horizon));
  }
}
BENCHMARK(BM_LazySolveHorizon)->Arg(100)->Arg(1000);

static void BM_TableSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int horizon = static_cast<int>(state.range(1));
  const ModelParams p =
      ModelParams::uniform_arrivals(n, horizon, 0.1, 0.5, 1.0 / (n + 1.0), 1.0, 3.0);
  for (auto _ : state) {
    LeanTableSolver table(p, horizon, 1);
    table.solve();
    benchmark::DoNotOptimize(table.registry_size());
  }
}
BENCHMARK(BM_TableSolve)->Args({5, 1000})->Args({8, 500})->Unit(benchmark::kMillisecond);

static void BM_WarmDecision(benchmark::State& state) {
  const ModelParams p = ModelParams::uniform_arrivals(5, 500, 0.5, 0.5, 0.5, 1.0, 3.0);
  LeanTableSolver table(p, 500, 1);
  table.solve();
  int horizon = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.decision({0, 1, 0, 2, 1}, 1 + (horizon++ % 500)));
  }
}
BENCHMARK(BM_WarmDecision);
