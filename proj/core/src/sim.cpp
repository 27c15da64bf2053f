#include "edgeoffload/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "edgeoffload/reduction.hpp"

namespace edgeoffload {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr double kZ95 = 1.959963984540054;

}  // namespace

double CounterRng::uniform(std::uint64_t slot, std::uint32_t draw) const {
  std::uint64_t h = mix64(base_);
  h = mix64(h ^ replication_);
  h = mix64(h ^ slot);
  h = mix64(h ^ draw);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PolicySpec PolicySpec::threshold(int b) {
  if (b < 0) throw std::invalid_argument("threshold bound must be >= 0");
  return {Kind::kThreshold, b};
}

std::string PolicySpec::name() const {
  switch (kind) {
    case Kind::kOptimal: return "optimal";
    case Kind::kThreshold: return "threshold_" + std::to_string(threshold_bound);
    case Kind::kExpiryDriven: return "expiry_driven";
    case Kind::kRandom: return "random";
    case Kind::kOnTheSpot: return "on_the_spot";
  }
  return "unknown";
}

bool SimMetrics::conserves_tasks() const {
  return initial_tasks + tasks_arrived == tasks_expired + tasks_offloaded +
                                              tasks_dropped_free + tasks_processed +
                                              final_tasks;
}

namespace {

class ThresholdDriver : public PolicyDriver {
 public:
  explicit ThresholdDriver(int bound) : bound_(bound) {}
  int choose(const SystemState& s, int, double) const override {
    return std::max(s.total() - bound_, 0);
  }

 private:
  int bound_;
};

class ExpiryDrivenDriver : public PolicyDriver {
 public:
  int choose(const SystemState& s, int, double) const override { return s.at(1); }
};

class RandomDriver : public PolicyDriver {
 public:
  int choose(const SystemState& s, int, double u) const override {
    // Uniform over {0, ..., total}; tasks leave most imminent first.
    return static_cast<int>(u * (s.total() + 1));
  }
};

class OnTheSpotDriver : public PolicyDriver {
 public:
  int choose(const SystemState& s, int, double) const override { return s.total(); }
};

class TableOptimalDriver : public PolicyDriver {
 public:
  explicit TableOptimalDriver(const LeanTableSolver& table) : table_(table) {}
  int choose(const SystemState& s, int horizon, double) const override {
    auto [reduced, stripped] = to_reduced(s, horizon);
    return stripped + table_.decision(reduced, horizon);
  }

 private:
  const LeanTableSolver& table_;
};

}  // namespace

std::unique_ptr<PolicyDriver> make_driver(const PolicySpec& spec,
                                          const LeanTableSolver* table) {
  switch (spec.kind) {
    case PolicySpec::Kind::kThreshold:
      return std::make_unique<ThresholdDriver>(spec.threshold_bound);
    case PolicySpec::Kind::kExpiryDriven:
      return std::make_unique<ExpiryDrivenDriver>();
    case PolicySpec::Kind::kRandom:
      return std::make_unique<RandomDriver>();
    case PolicySpec::Kind::kOnTheSpot:
      return std::make_unique<OnTheSpotDriver>();
    case PolicySpec::Kind::kOptimal:
      if (!table)
        throw std::invalid_argument("the optimal policy needs a solved table");
      return std::make_unique<TableOptimalDriver>(*table);
  }
  throw std::invalid_argument("unknown policy kind");
}

SlotResult run_slot(const SystemState& s, const PolicyDriver& policy,
                    const SlotOutcome& outcome, int horizon,
                    const ModelParams& params, double policy_draw) {
  SlotResult r;
  SystemState state = s;

  if (outcome.relay_present) {
    const int count = policy.choose(state, horizon, policy_draw);
    if (count < 0 || count > state.total())
      throw PolicyContractError("policy chose " + std::to_string(count) +
                                " with " + std::to_string(state.total()) +
                                " tasks queued");
    r.cost += params.offload_cost * count;
    r.deltas.offloaded = count;
    state = offload_most_imminent(state, count);
  }

  ShiftResult shifted = shift_deadlines(state);
  state = shifted.state;
  r.cost += params.expiry_penalty * shifted.expired;
  r.deltas.expired = shifted.expired;

  if (outcome.arrival_deadline > 0) {
    state = add_arrival(state, outcome.arrival_deadline);
    r.deltas.arrived = 1;
  }

  if (outcome.local_service) {
    r.deltas.local_opportunities = 1;
    if (!state.empty()) {
      state = process_most_imminent(state);
      r.deltas.local_used = 1;
      r.deltas.processed = 1;
    }
  }

  r.state = state;
  return r;
}

namespace {

int sample_arrival(const ModelParams& params, double u) {
  double cum = 0.0;
  for (int k = 0; k <= params.max_deadline; ++k) {
    cum += params.arrival[static_cast<std::size_t>(k)];
    if (u < cum) return k;
  }
  return 0;  // guards against cum rounding just below 1
}

SimMetrics run_replication(const SimConfig& cfg, const PolicyDriver& policy,
                           int replication) {
  const ModelParams& p = cfg.params;
  CounterRng rng(cfg.base_seed, static_cast<std::uint64_t>(replication));
  SystemState state =
      cfg.initial_state.size() == p.max_deadline ? cfg.initial_state
                                                 : SystemState(p.max_deadline);
  SimMetrics m;
  m.slots = p.horizon;
  m.initial_tasks = state.total();
  if (cfg.record_slot_costs) m.slot_costs.reserve(static_cast<std::size_t>(p.horizon));

  for (int t = 0; t < p.horizon; ++t) {
    const int horizon = p.horizon - t;
    if (cfg.restrict_to_reduced) {
      auto [reduced, dropped] = to_reduced(state, horizon);
      state = reduced;
      m.tasks_dropped_free += dropped;
    }
    const auto slot = static_cast<std::uint64_t>(t);
    SlotOutcome outcome;
    outcome.relay_present = rng.uniform(slot, 0) < p.relay_prob;
    outcome.arrival_deadline = sample_arrival(p, rng.uniform(slot, 1));
    outcome.local_service = rng.uniform(slot, 2) < p.local_prob;

    SlotResult r = run_slot(state, policy, outcome, horizon, p, rng.uniform(slot, 3));
    state = r.state;
    m.tasks_arrived += r.deltas.arrived;
    m.tasks_expired += r.deltas.expired;
    m.tasks_offloaded += r.deltas.offloaded;
    m.tasks_processed += r.deltas.processed;
    m.local_opportunities += r.deltas.local_opportunities;
    m.local_used += r.deltas.local_used;
    if (cfg.record_slot_costs) m.slot_costs.push_back(r.cost);
  }
  m.final_tasks = state.total();
  m.total_cost = p.offload_cost * static_cast<double>(m.tasks_offloaded) +
                 p.expiry_penalty * static_cast<double>(m.tasks_expired);
  return m;
}

double pairwise_sum_span(const double* xs, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return xs[0];
  const std::size_t half = n / 2;
  return pairwise_sum_span(xs, half) + pairwise_sum_span(xs + half, n - half);
}

struct MeanCi {
  double mean = 0.0;
  double ci_half = 0.0;
};

MeanCi normal_ci(const std::vector<double>& xs) {
  MeanCi out;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  out.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return out;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  out.ci_half = kZ95 * std::sqrt(var / n);
  return out;
}

}  // namespace

double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum_span(xs.data(), xs.size());
}

SimResult run(const SimConfig& cfg, const PolicyDriver& policy) {
  cfg.params.validate();
  if (cfg.replications < 1)
    throw std::invalid_argument("replications must be >= 1");

  SimResult result;
  result.replications.resize(static_cast<std::size_t>(cfg.replications));
  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, cfg.replications);
  if (threads <= 1) {
    for (int r = 0; r < cfg.replications; ++r)
      result.replications[static_cast<std::size_t>(r)] = run_replication(cfg, policy, r);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        try {
          for (int r = next.fetch_add(1); r < cfg.replications; r = next.fetch_add(1))
            result.replications[static_cast<std::size_t>(r)] =
                run_replication(cfg, policy, r);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> per_slot, per_task, util;
  per_slot.reserve(result.replications.size());
  for (const SimMetrics& m : result.replications) {
    per_slot.push_back(m.cost_per_slot());
    per_task.push_back(m.cost_per_task());
    util.push_back(m.local_utilization());
  }
  const MeanCi slot_ci = normal_ci(per_slot);
  const MeanCi task_ci = normal_ci(per_task);
  result.aggregate.replications = cfg.replications;
  result.aggregate.mean_cost_per_slot = slot_ci.mean;
  result.aggregate.ci_half_cost_per_slot = slot_ci.ci_half;
  result.aggregate.mean_cost_per_task = task_ci.mean;
  result.aggregate.ci_half_cost_per_task = task_ci.ci_half;
  result.aggregate.mean_local_utilization = normal_ci(util).mean;
  return result;
}

SimResult run(const SimConfig& cfg, const LeanTableSolver* table) {
  return run(cfg, *make_driver(cfg.policy, table));
}

ThresholdSweepResult sweep_threshold(const SimConfig& cfg, int lo, int hi) {
  if (lo < 0 || hi < lo) throw std::invalid_argument("bad threshold range");
  ThresholdSweepResult out;
  double best_cost = 0.0;
  for (int b = lo; b <= hi; ++b) {
    SimConfig c = cfg;
    c.policy = PolicySpec::threshold(b);
    const SimAggregate agg = run(c, nullptr).aggregate;
    out.thresholds.push_back(b);
    out.aggregates.push_back(agg);
    if (b == lo || agg.mean_cost_per_slot < best_cost) {
      best_cost = agg.mean_cost_per_slot;
      out.best_threshold = b;
    }
  }
  return out;
}

}  // namespace edgeoffload
