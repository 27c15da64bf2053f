#ifndef EDGEOFFLOAD_TESTS_TEST_UTIL_HPP_
#define EDGEOFFLOAD_TESTS_TEST_UTIL_HPP_

#include <functional>
#include <random>
#include <vector>

#include "edgeoffload/model.hpp"
#include "edgeoffload/types.hpp"

namespace testutil {

// Parameters from the first visualization study: N=3, T=1000, relay 0.7,
// service 0.7, half the slots bring an arrival with a uniform deadline.
inline edgeoffload::ModelParams table1(int horizon = 1000) {
  return edgeoffload::ModelParams::uniform_arrivals(3, horizon, 0.7, 0.7, 0.5, 1.0, 3.0);
}

// N=5 configuration used for the cost-curve chain study.
inline edgeoffload::ModelParams curve_params_a(int horizon = 1000) {
  return edgeoffload::ModelParams::uniform_arrivals(5, horizon, 0.5, 0.5, 0.5, 1.0, 3.0);
}

// N=10 configuration used for the baseline comparison studies.
inline edgeoffload::ModelParams baseline_params(double mu, int horizon) {
  return edgeoffload::ModelParams::uniform_arrivals(10, horizon, 0.1, mu, 1.0 / 11.0,
                                                    1.0, 3.0);
}

inline edgeoffload::SystemState random_state(std::mt19937_64& rng, int n, int max_count) {
  edgeoffload::SystemState s(n);
  for (int d = 1; d <= n; ++d)
    s.set(d, static_cast<int>(rng() % static_cast<std::uint64_t>(max_count + 1)));
  return s;
}

inline edgeoffload::ModelParams random_params(std::mt19937_64& rng, int n, int horizon) {
  const double relay = 0.2 + 0.07 * static_cast<double>(rng() % 10);
  const double local = 0.1 * static_cast<double>(rng() % 11);
  const double p0 = 0.2 + 0.06 * static_cast<double>(rng() % 10);
  const double penalty = 1.5 + 0.5 * static_cast<double>(rng() % 7);
  return edgeoffload::ModelParams::uniform_arrivals(n, horizon, relay, local, p0, 1.0,
                                                    penalty);
}

// All states of dimension n with total at most max_total.
inline std::vector<edgeoffload::SystemState> states_up_to(int n, int max_total) {
  std::vector<edgeoffload::SystemState> out;
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int d, int used) {
    if (d == n) {
      out.emplace_back(std::span<const int>(c));
      return;
    }
    for (int v = 0; used + v <= max_total; ++v) {
      c[static_cast<std::size_t>(d)] = v;
      rec(d + 1, used + v);
    }
    c[static_cast<std::size_t>(d)] = 0;
  };
  rec(0, 0);
  return out;
}

}  // namespace testutil

#endif  // EDGEOFFLOAD_TESTS_TEST_UTIL_HPP_
