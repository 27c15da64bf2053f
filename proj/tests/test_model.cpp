#include <doctest.h>

#include <random>

#include "edgeoffload/model.hpp"
#include "test_util.hpp"

using namespace edgeoffload;

TEST_CASE("offload removes the most imminent tasks in deadline order") {
  CHECK(offload_most_imminent({0, 5, 6, 7, 8}, 7) == SystemState{0, 0, 4, 7, 8});
  CHECK(offload_most_imminent({2, 3}, 0) == SystemState{2, 3});
  CHECK(offload_most_imminent({0, 1, 2, 0, 1}, 2) == SystemState{0, 0, 1, 0, 1});
  CHECK_THROWS_AS((void)offload_most_imminent({1, 1, 0}, 3), InvalidDecisionError);
  CHECK_THROWS_AS((void)offload_most_imminent({1, 1, 0}, -1), InvalidDecisionError);
}

TEST_CASE("deadline shift expires the front bucket") {
  const auto [s1, e1] = shift_deadlines({0, 0, 1, 0, 1});
  CHECK(s1 == SystemState{0, 1, 0, 1, 0});
  CHECK(e1 == 0);

  const auto [s2, e2] = shift_deadlines(SystemState(4));
  CHECK(s2 == SystemState(4));
  CHECK(e2 == 0);

  const auto [s3, e3] = shift_deadlines({3, 1});
  CHECK(s3 == SystemState{1, 0});
  CHECK(e3 == 3);
}

TEST_CASE("arrivals land in their deadline bucket; 0 means none") {
  CHECK(add_arrival({0, 1, 0, 1, 0}, 3) == SystemState{0, 1, 1, 1, 0});
  CHECK(add_arrival({4, 2}, 0) == SystemState{4, 2});
  CHECK(add_arrival({0, 0}, 2) == SystemState{0, 1});
  CHECK_THROWS_AS((void)add_arrival({0, 0}, 3), InvalidArrivalError);
}

TEST_CASE("local service takes the most imminent task, if any") {
  CHECK(process_most_imminent({0, 1, 1, 1, 0}) == SystemState{0, 0, 1, 1, 0});
  CHECK(process_most_imminent(SystemState(3)) == SystemState(3));
  CHECK(process_most_imminent({0, 0, 2}) == SystemState{0, 0, 1});
}

TEST_CASE("slot pipeline composes offload, shift, arrival, service") {
  CHECK(next_state({0, 1, 2, 0, 1}, 2, 3, true) == SystemState{0, 0, 1, 1, 0});
  CHECK(next_state({0, 1, 2, 0, 1}, 2, 3, false) == SystemState{0, 1, 1, 1, 0});
  CHECK(next_state(SystemState(5), 0, 0, true) == SystemState(5));
  // Service follows the arrival, so a task landing in an empty queue can be
  // served within its arrival slot.
  CHECK(next_state(SystemState(3), 0, 2, true) == SystemState(3));
  CHECK(next_state(SystemState(3), 0, 2, false) == SystemState{0, 1, 0});
}

TEST_CASE("instantaneous costs") {
  const ModelParams p = testutil::table1();
  CHECK(cost_with_relay({2, 0, 0}, 0, p) == doctest::Approx(6.0));
  CHECK(cost_with_relay({2, 0, 0}, 2, p) == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)cost_with_relay({1, 1, 0}, 3, p), InvalidDecisionError);

  CHECK(cost_without_relay({2, 5, 0}, p) == doctest::Approx(6.0));
  CHECK(cost_without_relay({0, 9, 9}, p) == doctest::Approx(0.0));

  CHECK(expected_instant_cost({2, 0, 0}, 2, p) == doctest::Approx(3.2));
  CHECK(expected_instant_cost(SystemState(3), 0, p) == doctest::Approx(0.0));

  ModelParams certain = p;
  certain.relay_prob = 1.0;
  CHECK(expected_instant_cost({3, 1, 0}, 3, certain) ==
        doctest::Approx(3.0 * certain.offload_cost));
}

TEST_CASE("per-slot task conservation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const SystemState s = testutil::random_state(rng, n, 4);
    const int count = static_cast<int>(rng() % static_cast<std::uint64_t>(s.total() + 1));
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
    const bool local = rng() % 2 == 0;

    const SystemState after_offload = offload_most_imminent(s, count);
    const auto [shifted, expired] = shift_deadlines(after_offload);
    const SystemState arrived = add_arrival(shifted, k);
    const bool local_applied = local && !arrived.empty();
    const SystemState next = next_state(s, count, k, local);

    CHECK(s.total() + (k > 0 ? 1 : 0) ==
          next.total() + count + expired + (local_applied ? 1 : 0));
  }
}

TEST_CASE("larger offloads remove a superset, added deadlines never decrease") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const SystemState s = testutil::random_state(rng, n, 4);
    int prev_max_removed = 0;
    for (int count = 0; count < s.total(); ++count) {
      const SystemState a = offload_most_imminent(s, count);
      const SystemState b = offload_most_imminent(s, count + 1);
      int newly_removed_at = 0;
      for (int d = 1; d <= n; ++d) {
        CHECK(b.at(d) <= a.at(d));  // superset of removals
        if (b.at(d) < a.at(d)) newly_removed_at = d;
      }
      CHECK(newly_removed_at >= prev_max_removed);
      prev_max_removed = newly_removed_at;
    }
  }
}

TEST_CASE("offloading commutes out of the slot pipeline") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const SystemState s = testutil::random_state(rng, n, 4);
    const int count = static_cast<int>(rng() % static_cast<std::uint64_t>(s.total() + 1));
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
    const bool local = rng() % 2 == 0;
    CHECK(next_state(s, count, k, local) ==
          next_state(offload_most_imminent(s, count), 0, k, local));
  }
}

TEST_CASE("expected instantaneous cost is convex in the offload count") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const ModelParams p = testutil::random_params(rng, n, 4);
    const SystemState s = testutil::random_state(rng, n, 5);
    for (int count = 0; count + 2 <= s.total(); ++count) {
      const Cost second_diff = expected_instant_cost(s, count, p) +
                               expected_instant_cost(s, count + 2, p) -
                               2.0 * expected_instant_cost(s, count + 1, p);
      CHECK(second_diff >= -1e-12);
    }
  }
}

TEST_CASE("parameter validation") {
  ModelParams p = testutil::table1();
  CHECK_NOTHROW(p.validate());

  ModelParams bad_sum = p;
  bad_sum.arrival[1] += 0.1;
  CHECK_THROWS_AS(bad_sum.validate(), std::invalid_argument);

  ModelParams bad_costs = p;
  bad_costs.expiry_penalty = bad_costs.offload_cost;
  CHECK_THROWS_AS(bad_costs.validate(), std::invalid_argument);

  ModelParams bad_len = p;
  bad_len.arrival.push_back(0.0);
  CHECK_THROWS_AS(bad_len.validate(), std::invalid_argument);
}
