#include <doctest.h>

#include <cmath>
#include <random>

#include "edgeoffload/dp.hpp"
#include "edgeoffload/lean_table.hpp"
#include "edgeoffload/reduction.hpp"
#include "test_util.hpp"

using namespace edgeoffload;

TEST_CASE("table induction matches the lazy solver") {
  for (int n : {3, 4}) {
    std::mt19937_64 rng(50 + static_cast<std::uint64_t>(n));
    const ModelParams p = testutil::random_params(rng, n, 40);
    DpSolver solver(p);
    LeanTableSolver table(p, 40);
    std::vector<SystemState> generic;
    for (int trial = 0; trial < 25; ++trial)
      generic.push_back(testutil::random_state(rng, n, 4));
    for (const SystemState& s : generic) table.add_root(s);
    table.solve();

    for (const SystemState& r : enumerate_reduced(n)) {
      for (int horizon : {1, 2, 3, 5, 9, 17, 40}) {
        CHECK(table.decision(r, horizon) == solver.optimal_decision(r, horizon));
      }
      CHECK(std::abs(table.value_at_horizon(r) - solver.value(r, 40)) < 1e-9);
    }

    // Generic states with doomed tasks go through the lean correction.
    for (const SystemState& s : generic)
      CHECK(std::abs(table.value_at_horizon(s) - solver.value(s, 40)) < 1e-9);
  }
}

TEST_CASE("table matches the lazy solver at the wide-queue configuration") {
  const ModelParams p =
      ModelParams::uniform_arrivals(10, 30, 0.1, 0.5, 1.0 / 11.0, 1.0, 3.0);
  DpSolver solver(p);
  LeanTableSolver table(p, 30);
  const std::vector<SystemState> probes = {
      SystemState{0, 0, 1, 0, 2, 0, 0, 1, 0, 3},
      SystemState{2, 1, 0, 0, 0, 3, 0, 0, 2, 1},
      SystemState(10)};
  for (const SystemState& s : probes) table.add_root(s);
  table.solve();

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    SystemState r(10);
    int prefix = 0;
    for (int d = 1; d <= 10; ++d) {
      const int c = static_cast<int>(rng() % 3);
      if (prefix + c <= d - 1) {
        r.set(d, c);
        prefix += c;
      }
    }
    for (int horizon : {1, 3, 9, 11, 30})
      CHECK(table.decision(r, horizon) == solver.optimal_decision(r, horizon));
  }
  for (const SystemState& s : probes)
    CHECK(std::abs(table.value_at_horizon(s) - solver.value(s, 30)) < 1e-9);
}

TEST_CASE("table decisions below the deadline span use the live part only") {
  const ModelParams p = testutil::table1(6);
  DpSolver solver(p);
  LeanTableSolver table(p, 6);
  table.solve();
  for (const SystemState& r : enumerate_reduced(3))
    for (int horizon = 1; horizon <= 6; ++horizon)
      CHECK(table.decision(r, horizon) == solver.optimal_decision(r, horizon));
}

TEST_CASE("worker count does not change the result") {
  const ModelParams p = testutil::curve_params_a(30);
  LeanTableSolver one(p, 30, 1);
  LeanTableSolver two(p, 30, 2);
  one.solve();
  two.solve();
  CHECK(one.registry_size() == two.registry_size());
  for (const SystemState& r : enumerate_reduced(5)) {
    CHECK(one.value_at_horizon(r) == two.value_at_horizon(r));
    for (int horizon : {1, 4, 17, 30})
      CHECK(one.decision(r, horizon) == two.decision(r, horizon));
  }
}

TEST_CASE("queries outside the solved range are rejected") {
  const ModelParams p = testutil::table1(10);
  LeanTableSolver table(p, 10);
  CHECK_THROWS_AS((void)table.decision({0, 0, 1}, 5), std::logic_error);
  table.solve();
  CHECK_THROWS_AS((void)table.decision({0, 0, 1}, 11), std::invalid_argument);
  CHECK_THROWS_AS((void)table.decision({0, 0, 1}, 0), std::invalid_argument);
  // Not a residual state: deadline-1 tasks are doomed.
  CHECK_THROWS_AS((void)table.decision({1, 0, 0}, 5), std::invalid_argument);
}
