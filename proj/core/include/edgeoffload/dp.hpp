#ifndef EDGEOFFLOAD_DP_HPP_
#define EDGEOFFLOAD_DP_HPP_

#include <atomic>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

#include "edgeoffload/model.hpp"
#include "edgeoffload/reduction.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

// Write-once map from (state, remaining horizon) to the optimal expected cost
// and the optimal offload count at that node. Safe for concurrent
// insert-if-absent; an existing entry is never replaced.
class MemoStore {
 public:
  struct Entry {
    Cost value = 0.0;
    int decision = 0;
  };

  std::optional<Entry> find(const SystemState& s, int horizon) const;
  // Returns true when the entry was inserted, false when one already existed.
  bool insert(const SystemState& s, int horizon, Entry e);

  std::size_t size() const;
  void clear();

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  std::uint64_t inserts() const { return inserts_.load(std::memory_order_relaxed); }

 private:
  struct Key {
    SystemState s;
    int horizon;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return k.s.hash() * 1099511628211ull + static_cast<std::uint64_t>(k.horizon);
    }
  };

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Entry, KeyHash> map_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
  std::atomic<std::uint64_t> inserts_{0};
};

// Finite-horizon solver for the optimal offload count.
//
// value() returns the minimum expected total cost over `horizon` slots. The
// recursion follows the slot pipeline: the relay branch minimizes the
// instantaneous cost plus the expected continuation over arrival/service
// events, the no-relay branch is forced to offload nothing. Continuations are
// evaluated level by level (never by deep recursion), and every state reached
// at the next slot is rewritten to its lean core plus the closed-form
// correction before lookup, so memo keys range over the finite lean space.
class DpSolver {
 public:
  struct Options {
    bool lean_rewrite = true;  // off: memo keys are raw states (for sizing studies)
    bool use_memo = true;      // off: plain recursive evaluation, tiny scale only
    bool full_domain = false;  // search offload counts below the doomed-task floor too
  };

  explicit DpSolver(ModelParams params) : DpSolver(std::move(params), Options{}) {}
  DpSolver(ModelParams params, Options options);

  // Minimum expected total cost from s over `horizon` slots (unnormalized).
  Cost value(const SystemState& s, int horizon);

  // Expected total cost given the relay is present now and exactly `count`
  // tasks are offloaded now.
  Cost relay_value(const SystemState& s, int count, int horizon);

  // Expected total cost given the relay is absent this slot.
  Cost no_relay_value(const SystemState& s, int horizon);

  // Offload-count cost curve: no_relay_value of the post-offload state plus
  // the offload charge. Discrete convex on its domain [n_1, total]; its
  // minimizer is the optimal decision. Throws CurveDomainError off-domain.
  Cost offload_curve(const SystemState& s, int count, int horizon);

  // Largest minimizer of the relay-branch cost; always >= the deadline-1
  // count unless full_domain search says otherwise (it never does).
  int optimal_decision(const SystemState& s, int horizon);

  const ModelParams& params() const { return params_; }
  const Options& options() const { return options_; }
  MemoStore& memo() { return memo_; }
  std::uint64_t nodes_evaluated() const {
    return nodes_evaluated_.load(std::memory_order_relaxed);
  }

 private:
  struct Evaluated {
    Cost value;
    int decision;
  };

  // Canonical memo key for a raw state plus the value offset between them.
  std::pair<SystemState, Cost> rewrite(const SystemState& raw, int horizon) const;

  Cost child_value(const SystemState& raw_child, int horizon);
  template <typename ChildFn>
  Cost expected_future(const SystemState& y, int child_horizon, ChildFn&& child);
  template <typename ChildFn>
  Evaluated node_value(const SystemState& x, int horizon, ChildFn&& child);

  Evaluated evaluate_plain(const SystemState& x, int horizon);
  void ensure_computed(const SystemState& key, int horizon);

  ModelParams params_;
  Options options_;
  MemoStore memo_;
  std::atomic<std::uint64_t> nodes_evaluated_{0};
};

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_DP_HPP_
