#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "edgeoffload/model.hpp"
#include "edgeoffload/reduction.hpp"

using namespace edgeoffload;

namespace {

std::vector<SystemState> sample_states(int n, std::size_t count) {
  std::mt19937_64 rng(1234);
  std::vector<SystemState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SystemState s(n);
    for (int d = 1; d <= n; ++d) s.set(d, static_cast<int>(rng() % 6));
    out.push_back(s);
  }
  return out;
}

}  // namespace

static void BM_ToReduced(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto states = sample_states(n, 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_reduced(states[i++ & 1023], n));
  }
}
BENCHMARK(BM_ToReduced)->Arg(3)->Arg(5)->Arg(10);

static void BM_ToLean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::uniform_arrivals(n, 100, 0.5, 0.5, 0.5, 1.0, 3.0);
  const auto states = sample_states(n, 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_lean(states[i++ & 1023], n, p));
  }
}
BENCHMARK(BM_ToLean)->Arg(3)->Arg(5)->Arg(10);

static void BM_EnumerateReduced(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_reduced(n));
  }
}
BENCHMARK(BM_EnumerateReduced)->Arg(7)->Arg(10)->Arg(12);
