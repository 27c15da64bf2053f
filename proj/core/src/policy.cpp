#include "edgeoffload/policy.hpp"

#include <algorithm>

#include "edgeoffload/reduction.hpp"

namespace edgeoffload {

PolicyEngine::PolicyEngine(ModelParams params) : solver_(std::move(params)) {}

Decision PolicyEngine::decide(const SystemState& s, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  auto [reduced, stripped] = to_reduced(s, horizon);

  int residual_count = -1;
  if (auto hit = memo().find(reduced, horizon)) {
    residual_count = hit->decision;
  } else {
    // Walk down the removal chain; a known positive decision u steps below
    // shifts back up by u. A known zero cannot be shifted up, and every state
    // further down is also zero, so give up and solve.
    SystemState walk = reduced;
    for (int steps = 1; walk.total() > 0; ++steps) {
      walk = offload_most_imminent(walk, 1);
      if (walk.empty()) break;
      if (auto below = memo().find(walk, horizon)) {
        if (below->decision >= 1)
          residual_count = infer_from_adjacent(below->decision,
                                               ChainDirection::kTowardLarger, steps);
        break;
      }
    }
    if (residual_count < 0) {
      solver_.value(reduced, horizon);  // fills the quadruplet store
      // A residual state with no doomed tasks is its own lean key, so the
      // solve above is guaranteed to have pinned its quadruplet.
      auto solved = memo().find(reduced, horizon);
      if (!solved) throw std::logic_error("residual state missing from the memo");
      residual_count = solved->decision;
    }
  }

  Decision d;
  d.count = stripped + residual_count;
  d.after = offload_most_imminent(s, d.count);
  return d;
}

int infer_from_adjacent(int known_count, ChainDirection direction, int steps) {
  if (known_count < 0 || steps < 0)
    throw std::invalid_argument("counts and steps must be non-negative");
  if (direction == ChainDirection::kTowardSmaller)
    return std::max(known_count - steps, 0);
  if (known_count == 0 && steps > 0)
    throw InferenceUnavailableError(
        "a zero decision does not determine the larger neighbor's decision");
  return known_count + steps;
}

bool is_adjacent(const SystemState& s, const SystemState& s_a) {
  if (s.size() != s_a.size()) return false;
  const int front = s.most_imminent_deadline();
  int added_at = 0;
  for (int d = 1; d <= s.size(); ++d) {
    const int diff = s_a.at(d) - s.at(d);
    if (diff == 0) continue;
    if (diff != 1 || added_at != 0) return false;
    added_at = d;
  }
  if (added_at == 0) return false;
  if (s.empty()) return true;  // any single added task neighbors the empty state
  return added_at <= front;
}

StateKind classify(const SystemState& s_a, int horizon, PolicyEngine& engine) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (s_a.empty()) return StateKind::kNonOffloading;
  const SystemState s = offload_most_imminent(s_a, 1);
  const Cost gap = engine.solver().value(s_a, horizon) - engine.solver().value(s, horizon);
  return gap < engine.params().offload_cost ? StateKind::kNonOffloading
                                            : StateKind::kOffloading;
}

int smallest_nonoffloading_distance(const SystemState& s, int horizon,
                                    PolicyEngine& engine) {
  for (int count = 0; count <= s.total(); ++count) {
    if (classify(offload_most_imminent(s, count), horizon, engine) ==
        StateKind::kNonOffloading)
      return count;
  }
  throw std::logic_error("unreachable: the empty state is non-offloading");
}

std::vector<DecisionCell> decision_map(const SliceSpec& slice, int horizon,
                                       PolicyEngine& engine) {
  if (slice.x_deadline == slice.y_deadline)
    throw std::invalid_argument("slice coordinates must differ");
  std::vector<DecisionCell> out;
  out.reserve(static_cast<std::size_t>(slice.x_max + 1) *
              static_cast<std::size_t>(slice.y_max + 1));
  for (int x = 0; x <= slice.x_max; ++x) {
    for (int y = 0; y <= slice.y_max; ++y) {
      SystemState s = slice.fixed;
      s.set(slice.x_deadline, x);
      s.set(slice.y_deadline, y);
      DecisionCell cell;
      cell.x = x;
      cell.y = y;
      cell.count = engine.decide(s, horizon).count;
      cell.kind = cell.count > 0 ? StateKind::kOffloading : StateKind::kNonOffloading;
      out.push_back(cell);
    }
  }
  return out;
}

}  // namespace edgeoffload
