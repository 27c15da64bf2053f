#ifndef EDGEOFFLOAD_SIM_HPP_
#define EDGEOFFLOAD_SIM_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "edgeoffload/lean_table.hpp"
#include "edgeoffload/model.hpp"
#include "edgeoffload/policy.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

// Counter-based generator: every variate is a pure function of
// (base seed, replication, slot, draw index), so replications are
// independent streams and any draw can be replayed in isolation.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-counter";

  CounterRng(std::uint64_t base_seed, std::uint64_t replication)
      : base_(base_seed), replication_(replication) {}

  double uniform(std::uint64_t slot, std::uint32_t draw) const;

 private:
  std::uint64_t base_;
  std::uint64_t replication_;
};

struct PolicySpec {
  enum class Kind { kOptimal, kThreshold, kExpiryDriven, kRandom, kOnTheSpot };
  Kind kind = Kind::kOptimal;
  int threshold_bound = 0;  // queue-length bound, kThreshold only

  static PolicySpec optimal() { return {Kind::kOptimal, 0}; }
  static PolicySpec threshold(int b);
  static PolicySpec expiry_driven() { return {Kind::kExpiryDriven, 0}; }
  static PolicySpec random() { return {Kind::kRandom, 0}; }
  static PolicySpec on_the_spot() { return {Kind::kOnTheSpot, 0}; }

  std::string name() const;
};

struct SimMetrics {
  std::int64_t slots = 0;
  std::int64_t initial_tasks = 0;
  std::int64_t final_tasks = 0;
  std::int64_t tasks_arrived = 0;
  std::int64_t tasks_expired = 0;
  std::int64_t tasks_offloaded = 0;
  std::int64_t tasks_processed = 0;
  std::int64_t tasks_dropped_free = 0;  // reduced-space restriction, uncharged
  std::int64_t local_opportunities = 0;
  std::int64_t local_used = 0;
  Cost total_cost = 0.0;  // always offload_cost * offloaded + penalty * expired
  std::vector<Cost> slot_costs;  // filled only when requested

  double cost_per_slot() const { return slots ? total_cost / static_cast<double>(slots) : 0.0; }
  double cost_per_task() const {
    const std::int64_t seen = initial_tasks + tasks_arrived;
    return seen ? total_cost / static_cast<double>(seen) : 0.0;
  }
  double local_utilization() const {
    return local_opportunities ? static_cast<double>(local_used) /
                                     static_cast<double>(local_opportunities)
                               : 0.0;
  }
  // initial + arrived == expired + offloaded + dropped + processed + final
  bool conserves_tasks() const;
};

struct SimConfig {
  ModelParams params;            // params.horizon = slots per replication
  PolicySpec policy;
  int replications = 30;
  std::uint64_t base_seed = 0;
  SystemState initial_state;     // defaults to the empty state
  bool restrict_to_reduced = false;  // drop doomed tasks, uncharged, at slot start
  bool record_slot_costs = false;
  int threads = 0;               // 0 = hardware concurrency
};

// Chooses the offload count when the relay is present. `u` is the slot's
// policy draw in [0, 1); deterministic policies ignore it.
class PolicyDriver {
 public:
  virtual ~PolicyDriver() = default;
  virtual int choose(const SystemState& s, int horizon, double u) const = 0;
};

// Baseline drivers and the solved-table optimal driver.
std::unique_ptr<PolicyDriver> make_driver(const PolicySpec& spec,
                                          const LeanTableSolver* table);

struct SlotDeltas {
  int arrived = 0;
  int expired = 0;
  int offloaded = 0;
  int processed = 0;
  int local_opportunities = 0;
  int local_used = 0;
};

struct SlotResult {
  SystemState state;
  Cost cost = 0.0;
  SlotDeltas deltas;
};

// One slot of the event pipeline under fixed event realizations. Throws
// PolicyContractError when the driver returns an infeasible count.
SlotResult run_slot(const SystemState& s, const PolicyDriver& policy,
                    const SlotOutcome& outcome, int horizon,
                    const ModelParams& params, double policy_draw);

struct SimAggregate {
  int replications = 0;
  double mean_cost_per_slot = 0.0;
  double ci_half_cost_per_slot = 0.0;
  double mean_cost_per_task = 0.0;
  double ci_half_cost_per_task = 0.0;
  double mean_local_utilization = 0.0;
};

struct SimResult {
  SimAggregate aggregate;
  std::vector<SimMetrics> replications;
};

SimResult run(const SimConfig& cfg, const PolicyDriver& policy);

// Convenience entry that builds (and, for the optimal policy, solves) the
// required driver.
SimResult run(const SimConfig& cfg, const LeanTableSolver* table = nullptr);

struct ThresholdSweepResult {
  int best_threshold = 0;
  std::vector<int> thresholds;
  std::vector<SimAggregate> aggregates;
};

// Runs the threshold policy across bounds [lo, hi] with common random
// numbers; best is the cost-per-slot minimizer (smallest bound on ties).
ThresholdSweepResult sweep_threshold(const SimConfig& cfg, int lo, int hi);

// Deterministic order-insensitive reduction used for aggregation.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_SIM_HPP_
