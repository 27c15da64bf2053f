#include <doctest.h>

#include <atomic>
#include <random>
#include <thread>

#include "edgeoffload/policy.hpp"
#include "edgeoffload/reduction.hpp"
#include "test_util.hpp"

using namespace edgeoffload;

TEST_CASE("decide strips doomed tasks and resolves the residual") {
  PolicyEngine engine(testutil::table1());
  const Decision d = engine.decide({0, 0, 2}, 1000);
  CHECK(d.count == 1);
  CHECK(d.after == SystemState{0, 0, 1});

  const Decision zero = engine.decide(SystemState(3), 1000);
  CHECK(zero.count == 0);
  CHECK(zero.after == SystemState(3));
}

TEST_CASE("a warmed memo answers repeat queries without re-solving") {
  PolicyEngine engine(testutil::table1());
  const Decision first = engine.decide({2, 1, 2}, 200);
  const auto nodes_after_first = engine.solver().nodes_evaluated();
  const Decision second = engine.decide({2, 1, 2}, 200);
  CHECK(second.count == first.count);
  CHECK(second.after == first.after);
  CHECK(engine.solver().nodes_evaluated() == nodes_after_first);
}

TEST_CASE("chain inference rules") {
  CHECK(infer_from_adjacent(3, ChainDirection::kTowardSmaller) == 2);
  CHECK(infer_from_adjacent(0, ChainDirection::kTowardSmaller) == 0);
  CHECK(infer_from_adjacent(2, ChainDirection::kTowardSmaller, 5) == 0);
  CHECK(infer_from_adjacent(3, ChainDirection::kTowardLarger) == 4);
  CHECK(infer_from_adjacent(1, ChainDirection::kTowardLarger, 4) == 5);
  CHECK_THROWS_AS((void)infer_from_adjacent(0, ChainDirection::kTowardLarger),
                  InferenceUnavailableError);
  CHECK(infer_from_adjacent(0, ChainDirection::kTowardLarger, 0) == 0);
}

TEST_CASE("adjacency predicate") {
  CHECK(is_adjacent({0, 0, 1, 4, 4}, {0, 1, 1, 4, 4}));
  CHECK(is_adjacent({0, 1, 1, 3, 3}, {0, 2, 1, 3, 3}));
  CHECK(is_adjacent({0, 0, 1}, {0, 0, 2}));
  CHECK_FALSE(is_adjacent({0, 0, 1}, {1, 0, 2}));
  // Additions above the most imminent deadline are not adjacent.
  CHECK_FALSE(is_adjacent({0, 1, 0}, {0, 1, 1}));
  // Single-task states neighbor the empty state.
  CHECK(is_adjacent(SystemState(4), {0, 0, 0, 1}));
  CHECK_FALSE(is_adjacent(SystemState(4), SystemState(4)));
  CHECK_FALSE(is_adjacent({0, 1}, {0, 1}));
}

TEST_CASE("value-gap classification at the long horizon") {
  PolicyEngine engine(testutil::table1());
  CHECK(classify({0, 0, 1}, 1000, engine) == StateKind::kNonOffloading);
  CHECK(classify({0, 1, 0}, 1000, engine) == StateKind::kNonOffloading);
  CHECK(classify(SystemState(3), 1000, engine) == StateKind::kNonOffloading);
  CHECK(classify({0, 0, 2}, 1000, engine) == StateKind::kOffloading);
  CHECK(classify({1, 0, 0}, 1000, engine) == StateKind::kOffloading);
  CHECK(classify({2, 3, 1}, 1000, engine) == StateKind::kOffloading);
}

TEST_CASE("smallest non-offloading distance equals the decision") {
  PolicyEngine engine(testutil::table1());
  CHECK(smallest_nonoffloading_distance({0, 0, 2}, 1000, engine) == 1);
  CHECK(smallest_nonoffloading_distance({0, 1, 0}, 1000, engine) == 0);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int horizon = 1 + static_cast<int>(rng() % 5);
    PolicyEngine e(testutil::random_params(rng, n, horizon));
    const SystemState s = testutil::random_state(rng, n, 3);
    CHECK(smallest_nonoffloading_distance(s, horizon, e) == e.decide(s, horizon).count);
  }
}

TEST_CASE("cost-curve chain study decisions") {
  PolicyEngine engine(testutil::curve_params_a());
  const std::vector<SystemState> chain = {
      {0, 0, 0, 0, 1}, {0, 0, 0, 0, 2}, {0, 0, 1, 0, 2}, {0, 1, 1, 0, 2}};
  const std::vector<int> expected = {0, 0, 1, 2};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    CHECK(engine.decide(chain[i], 1000).count == expected[i]);
    if (i > 0) CHECK(is_adjacent(chain[i - 1], chain[i]));
  }
  // Decisions shift by exactly one down the chain once positive.
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const int inferred =
        infer_from_adjacent(expected[i], ChainDirection::kTowardSmaller);
    CHECK(expected[i - 1] == inferred);
  }
}

TEST_CASE("decisions step down by one along removal chains") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int horizon = 1 + static_cast<int>(rng() % 5);
    PolicyEngine engine(testutil::random_params(rng, n, horizon));
    const SystemState s = testutil::random_state(rng, n, 3);
    const int base = engine.decide(s, horizon).count;
    for (int removed = 1; removed <= s.total(); ++removed) {
      const SystemState down = offload_most_imminent(s, removed);
      CHECK(engine.decide(down, horizon).count == std::max(base - removed, 0));
    }
  }
}

TEST_CASE("adjacency relations between decisions hold on a small corpus") {
  std::mt19937_64 rng(43);
  int upward_zero_cases = 0, upward_zero_stays = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int horizon = 1 + static_cast<int>(rng() % 5);
    PolicyEngine engine(testutil::random_params(rng, n, horizon));
    const SystemState s = testutil::random_state(rng, n, 3);
    const int front = s.most_imminent_deadline();
    const int limit = front == 0 ? n : front;
    for (int add_at = 1; add_at <= limit; ++add_at) {
      SystemState s_a = s;
      s_a.set(add_at, s_a.at(add_at) + 1);
      REQUIRE(is_adjacent(s, s_a));
      const int l = engine.decide(s, horizon).count;
      const int l_a = engine.decide(s_a, horizon).count;
      if (l_a >= 1) CHECK(l == l_a - 1);
      if (l_a == 0) CHECK(l == 0);
      if (l >= 1) CHECK(l_a == l + 1);
      if (l == 0) {
        ++upward_zero_cases;
        if (l_a == 0) ++upward_zero_stays;
      }
      // The gap-based classification agrees with the decision.
      CHECK((classify(s_a, horizon, engine) == StateKind::kNonOffloading) == (l_a == 0));
    }
  }
  // The larger neighbor of a non-offloading state can go either way; report
  // the split observed on this corpus.
  MESSAGE("upward-from-zero cases: ", upward_zero_cases, ", stayed zero: ",
          upward_zero_stays);
  CHECK(upward_zero_cases > 0);
}

TEST_CASE("decision surface slices") {
  PolicyEngine engine(testutil::table1());

  SliceSpec slice;
  slice.x_deadline = 1;
  slice.y_deadline = 2;
  slice.x_max = 5;
  slice.y_max = 5;
  slice.fixed = SystemState(3);

  const auto cells = decision_map(slice, 1000, engine);
  REQUIRE(cells.size() == 36);
  std::vector<std::pair<int, int>> quiet;
  for (const DecisionCell& c : cells)
    if (c.kind == StateKind::kNonOffloading) quiet.emplace_back(c.x, c.y);
  CHECK(quiet == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}});

  slice.fixed.set(3, 2);
  for (const DecisionCell& c : decision_map(slice, 1000, engine))
    CHECK(c.kind == StateKind::kOffloading);

  CHECK_THROWS_AS((void)decision_map(
                      [] {
                        SliceSpec bad;
                        bad.x_deadline = 2;
                        bad.y_deadline = 2;
                        bad.fixed = SystemState(3);
                        return bad;
                      }(),
                      10, engine),
                  std::invalid_argument);
}

TEST_CASE("concurrent callers sharing one engine agree with a serial run") {
  const ModelParams p = testutil::table1(120);
  const auto states = testutil::states_up_to(3, 4);

  PolicyEngine serial(p);
  std::vector<int> expected;
  expected.reserve(states.size());
  for (const SystemState& s : states) expected.push_back(serial.decide(s, 120).count);

  PolicyEngine shared(p);
  std::vector<int> got(states.size(), -1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < states.size();
         i = next.fetch_add(1))
      got[i] = shared.decide(states[i], 120).count;
  };
  std::thread a(worker), b(worker);
  a.join();
  b.join();
  for (std::size_t i = 0; i < states.size(); ++i) CHECK(got[i] == expected[i]);
}

TEST_CASE("cold and warm engines agree") {
  const ModelParams p = testutil::table1(60);
  PolicyEngine warm(p);
  for (const SystemState& s : testutil::states_up_to(3, 3)) warm.decide(s, 60);
  PolicyEngine cold(p);
  for (const SystemState& s : testutil::states_up_to(3, 3))
    CHECK(cold.decide(s, 60).count == warm.decide(s, 60).count);
}
