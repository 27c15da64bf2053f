#include "edgeoffload/dp.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_set>
#include <vector>

namespace edgeoffload {

std::optional<MemoStore::Entry> MemoStore::find(const SystemState& s,
                                                int horizon) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(Key{s, horizon});
  if (it == map_.end()) {
    misses_.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
  hits_.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

bool MemoStore::insert(const SystemState& s, int horizon, Entry e) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = map_.emplace(Key{s, horizon}, e);
  (void)it;
  if (inserted) inserts_.fetch_add(1, std::memory_order_relaxed);
  return inserted;
}

std::size_t MemoStore::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

void MemoStore::clear() {
  std::unique_lock lock(mutex_);
  map_.clear();
}

DpSolver::DpSolver(ModelParams params, Options options)
    : params_(std::move(params)), options_(options) {
  params_.validate();
}

std::pair<SystemState, Cost> DpSolver::rewrite(const SystemState& raw,
                                               int horizon) const {
  if (!options_.lean_rewrite) return {raw, 0.0};
  LeanDecomposition d = to_lean(raw, horizon, params_);
  return {d.lean, d.correction};
}

Cost DpSolver::child_value(const SystemState& raw_child, int horizon) {
  if (horizon == 0) return 0.0;
  auto [key, offset] = rewrite(raw_child, horizon);
  if (!options_.use_memo) return evaluate_plain(key, horizon).value + offset;
  auto hit = memo_.find(key, horizon);
  if (!hit) {
    ensure_computed(key, horizon);
    hit = memo_.find(key, horizon);
  }
  return hit->value + offset;
}

// Expectation of the next-slot cost-to-go for a fixed post-offload state:
// deadline shift, then arrival and service events in fixed enumeration order.
template <typename ChildFn>
Cost DpSolver::expected_future(const SystemState& y, int child_horizon,
                               ChildFn&& child) {
  const SystemState shifted = shift_deadlines(y).state;
  const double mu = params_.local_prob;
  Cost acc = 0.0;
  for (int k = 0; k <= params_.max_deadline; ++k) {
    const double pk = params_.arrival[static_cast<std::size_t>(k)];
    if (pk == 0.0) continue;
    const SystemState arrived = add_arrival(shifted, k);
    Cost branch = 0.0;
    if (mu > 0.0) branch += mu * child(process_most_imminent(arrived), child_horizon);
    if (mu < 1.0) branch += (1.0 - mu) * child(arrived, child_horizon);
    acc += pk * branch;
  }
  return acc;
}

template <typename ChildFn>
DpSolver::Evaluated DpSolver::node_value(const SystemState& x, int horizon,
                                         ChildFn&& child) {
  nodes_evaluated_.fetch_add(1, std::memory_order_relaxed);
  const int total = x.total();
  const int floor = options_.full_domain ? 0 : x.at(1);

  Cost best = 0.0;
  int best_count = floor;
  bool first = true;
  for (int count = floor; count <= total; ++count) {
    Cost v = cost_with_relay(x, count, params_);
    if (horizon > 1)
      v += expected_future(offload_most_imminent(x, count), horizon - 1, child);
    if (first || v <= best) {
      best = v;
      best_count = count;
      first = false;
    }
  }

  Cost no_relay = cost_without_relay(x, params_);
  if (horizon > 1) no_relay += expected_future(x, horizon - 1, child);

  return {params_.relay_prob * best + (1.0 - params_.relay_prob) * no_relay,
          best_count};
}

DpSolver::Evaluated DpSolver::evaluate_plain(const SystemState& x, int horizon) {
  auto child = [this](const SystemState& c, int h) { return child_value(c, h); };
  return node_value(x, horizon, child);
}

// Level-by-level evaluation: collect the needed keys downward, then fill the
// memo upward. Avoids call depth proportional to the horizon.
void DpSolver::ensure_computed(const SystemState& key, int horizon) {
  std::vector<std::unordered_set<SystemState, SystemStateHash>> needed(
      static_cast<std::size_t>(horizon) + 1);
  needed[static_cast<std::size_t>(horizon)].insert(key);

  auto discover = [this](const SystemState& x, int h,
                         std::unordered_set<SystemState, SystemStateHash>& into) {
    auto note = [&](const SystemState& raw) {
      auto [k, offset] = rewrite(raw, h - 1);
      (void)offset;
      if (!memo_.find(k, h - 1)) into.insert(k);
    };
    const int floor = options_.full_domain ? 0 : x.at(1);
    for (int count = floor; count <= x.total(); ++count) {
      const SystemState shifted =
          shift_deadlines(offload_most_imminent(x, count)).state;
      for (int k = 0; k <= params_.max_deadline; ++k) {
        if (params_.arrival[static_cast<std::size_t>(k)] == 0.0) continue;
        const SystemState arrived = add_arrival(shifted, k);
        if (params_.local_prob > 0.0) note(process_most_imminent(arrived));
        if (params_.local_prob < 1.0) note(arrived);
      }
    }
    {
      const SystemState shifted = shift_deadlines(x).state;
      for (int k = 0; k <= params_.max_deadline; ++k) {
        if (params_.arrival[static_cast<std::size_t>(k)] == 0.0) continue;
        const SystemState arrived = add_arrival(shifted, k);
        if (params_.local_prob > 0.0) note(process_most_imminent(arrived));
        if (params_.local_prob < 1.0) note(arrived);
      }
    }
  };

  for (int h = horizon; h >= 2; --h) {
    auto& frontier = needed[static_cast<std::size_t>(h)];
    auto& below = needed[static_cast<std::size_t>(h - 1)];
    for (const SystemState& x : frontier)
      if (!memo_.find(x, h)) discover(x, h, below);
  }

  auto child = [this](const SystemState& raw, int h) -> Cost {
    if (h == 0) return 0.0;
    auto [k, offset] = rewrite(raw, h);
    auto hit = memo_.find(k, h);
    return hit->value + offset;
  };
  for (int h = 1; h <= horizon; ++h) {
    for (const SystemState& x : needed[static_cast<std::size_t>(h)]) {
      if (memo_.find(x, h)) continue;
      Evaluated e = node_value(x, h, child);
      memo_.insert(x, h, {e.value, e.decision});
    }
  }
}

Cost DpSolver::value(const SystemState& s, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (horizon == 0) return 0.0;
  return child_value(s, horizon);
}

Cost DpSolver::relay_value(const SystemState& s, int count, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  Cost v = cost_with_relay(s, count, params_);
  if (horizon > 1) {
    auto child = [this](const SystemState& c, int h) { return child_value(c, h); };
    v += expected_future(offload_most_imminent(s, count), horizon - 1, child);
  }
  return v;
}

Cost DpSolver::no_relay_value(const SystemState& s, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  Cost v = cost_without_relay(s, params_);
  if (horizon > 1) {
    auto child = [this](const SystemState& c, int h) { return child_value(c, h); };
    v += expected_future(s, horizon - 1, child);
  }
  return v;
}

Cost DpSolver::offload_curve(const SystemState& s, int count, int horizon) {
  if (count < s.at(1) || count > s.total())
    throw CurveDomainError("offload count outside [" + std::to_string(s.at(1)) +
                           ", " + std::to_string(s.total()) + "]");
  return no_relay_value(offload_most_imminent(s, count), horizon) +
         params_.offload_cost * count;
}

int DpSolver::optimal_decision(const SystemState& s, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  auto child = [this](const SystemState& c, int h) { return child_value(c, h); };
  return node_value(s, horizon, child).decision;
}

}  // namespace edgeoffload
