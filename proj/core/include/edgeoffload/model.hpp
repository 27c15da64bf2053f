#ifndef EDGEOFFLOAD_MODEL_HPP_
#define EDGEOFFLOAD_MODEL_HPP_

#include <utility>
#include <vector>

#include "edgeoffload/types.hpp"

namespace edgeoffload {

// Stochastic and cost parameters of the slotted queue.
//
// Every slot runs the same event pipeline:
//   1. relay arrival (prob. relay_prob) and offloading of the chosen count,
//   2. deadline shift: deadline-1 tasks expire, everything else moves down,
//   3. at most one task arrival (arrival[k] = prob. of a deadline-k arrival,
//      arrival[0] = no arrival),
//   4. local service of the most imminent task (prob. local_prob).
struct ModelParams {
  int max_deadline = 1;          // number of deadline buckets
  int horizon = 1;               // slots in one episode
  double relay_prob = 0.5;       // per-slot availability of the offload relay
  double local_prob = 0.5;       // per-slot availability of local service
  std::vector<double> arrival;   // size max_deadline + 1, sums to 1
  double offload_cost = 1.0;     // charged per offloaded task
  double expiry_penalty = 2.0;   // charged per expired task

  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;

  // Convenience constructor: no-arrival probability p0, remainder split
  // uniformly over deadlines 1..n.
  static ModelParams uniform_arrivals(int n, int horizon, double relay_prob,
                                      double local_prob, double p0,
                                      double offload_cost, double expiry_penalty);
};

// Removes the `count` most imminent tasks (ascending deadline order).
// Throws InvalidDecisionError when count exceeds the queue size.
SystemState offload_most_imminent(const SystemState& s, int count);

struct ShiftResult {
  SystemState state;  // deadlines decremented, top bucket empty
  int expired = 0;    // deadline-1 tasks dropped
};
ShiftResult shift_deadlines(const SystemState& s);

// deadline == 0 is a no-arrival and returns s unchanged.
SystemState add_arrival(const SystemState& s, int deadline);

// Serves the most imminent task; no-op on an empty state.
SystemState process_most_imminent(const SystemState& s);

// Full pipeline for one slot with fixed event realizations: offload `count`,
// shift, add an arrival with the given deadline, then local service if
// `local_service` is set.
SystemState next_state(const SystemState& s, int count, int arrival_deadline,
                       bool local_service);

// Instantaneous cost when the relay is present: offloads cost offload_cost
// each, unoffloaded deadline-1 tasks expire at expiry_penalty each.
Cost cost_with_relay(const SystemState& s, int count, const ModelParams& p);

// Instantaneous cost when the relay is absent: all deadline-1 tasks expire.
Cost cost_without_relay(const SystemState& s, const ModelParams& p);

// Mixture of the two instantaneous costs under the relay-arrival probability.
Cost expected_instant_cost(const SystemState& s, int count, const ModelParams& p);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_MODEL_HPP_
