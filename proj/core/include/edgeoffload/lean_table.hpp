#ifndef EDGEOFFLOAD_LEAN_TABLE_HPP_
#define EDGEOFFLOAD_LEAN_TABLE_HPP_

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "edgeoffload/model.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

// Backward induction over the closed finite family of lean states, level by
// level up to a fixed horizon. Produces the optimal offload count for every
// reduced state at every remaining horizon, which is all a running policy
// needs: a live query maps its state to a reduced state first.
//
// Levels below the deadline span use per-level state rewriting (the lean map
// depends on the remaining horizon there); deeper levels share one stationary
// transition table. Tasks with deadlines beyond the remaining horizon cannot
// expire in-episode and are dropped from lookup keys.
class LeanTableSolver {
 public:
  LeanTableSolver(ModelParams params, int horizon, int threads = 0);

  // Registers a state whose value will be queried at the solved horizon.
  // Reduced-state decisions need no registration. Call before solve().
  void add_root(const SystemState& s);

  // Runs the induction; must be called once before queries.
  void solve();

  // Optimal offload count for a state at the given remaining horizon. The
  // state must already be reduced for that horizon.
  int decision(const SystemState& reduced, int horizon) const;

  // Expected total cost of an arbitrary state at the solved horizon.
  Cost value_at_horizon(const SystemState& s) const;

  int horizon() const { return horizon_; }
  std::size_t registry_size() const { return states_.size(); }

 private:
  struct NextRef {
    std::int32_t index = -1;
    Cost correction = 0.0;
  };

  int intern(const SystemState& s);
  void build_registry();
  void build_stationary_transitions();
  // Transition row of state `i` when the next slot has `child_horizon` left.
  void transition_row(int i, int child_horizon, NextRef* out) const;

  void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) const;

  ModelParams params_;
  int horizon_;
  int threads_;
  bool solved_ = false;

  std::vector<SystemState> roots_;
  std::vector<SystemState> states_;
  std::unordered_map<SystemState, std::int32_t, SystemStateHash> index_;

  // Flattened per-state rows of 2 * (max_deadline + 1) next references:
  // arrival deadline k = 0..N, service branch first, then no-service.
  std::vector<NextRef> stationary_;

  // Most-imminent removal chains, flattened; chain_offset_[i] + L indexes the
  // state after offloading L tasks from state i.
  std::vector<std::int32_t> chain_;
  std::vector<std::int64_t> chain_offset_;

  // decisions_[h * n_decision_states + ordinal] for reduced states only.
  std::vector<std::uint8_t> decisions_;
  std::unordered_map<SystemState, std::int32_t, SystemStateHash> decision_ordinal_;

  std::vector<Cost> value_prev_;
  std::vector<Cost> value_cur_;
};

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_LEAN_TABLE_HPP_
