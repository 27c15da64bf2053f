#ifndef EDGEOFFLOAD_POLICY_HPP_
#define EDGEOFFLOAD_POLICY_HPP_

#include <string>
#include <vector>

#include "edgeoffload/dp.hpp"
#include "edgeoffload/model.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

enum class StateKind { kOffloading, kNonOffloading };

struct Decision {
  int count = 0;        // optimal offload count for the queried state
  SystemState after;    // state left behind after offloading `count`
};

// Production policy. A query first strips the doomed tasks, then resolves the
// residual's optimal count from the memo: directly, by walking the
// most-imminent-removal chain and shifting a known neighbor's decision, or by
// solving the recursion and saving every (state, horizon, cost, count)
// quadruplet touched.
class PolicyEngine {
 public:
  explicit PolicyEngine(ModelParams params);

  Decision decide(const SystemState& s, int horizon);

  const ModelParams& params() const { return solver_.params(); }
  DpSolver& solver() { return solver_; }
  MemoStore& memo() { return solver_.memo(); }

 private:
  DpSolver solver_;
};

enum class ChainDirection {
  kTowardSmaller,  // neighbor reached by removing most-imminent tasks
  kTowardLarger,   // neighbor reached by adding tasks at or below the front
};

// Shifts a known optimal count along an adjacency chain. Toward smaller
// states the count drops one per step and sticks at zero. Toward larger
// states it grows one per step, but only a positive count can be extended;
// otherwise throws InferenceUnavailableError and the caller must solve.
int infer_from_adjacent(int known_count, ChainDirection direction, int steps = 1);

// True when s_a equals s plus one task at a deadline no later than the most
// imminent task of s. Any single-task state is adjacent to the empty state.
bool is_adjacent(const SystemState& s, const SystemState& s_a);

// Offloading/non-offloading test via the value gap to the state one
// most-imminent task smaller: the gap stays below the per-task offload cost
// exactly on non-offloading states. Empty states are non-offloading.
StateKind classify(const SystemState& s_a, int horizon, PolicyEngine& engine);

// Smallest count whose post-offload state is non-offloading; equals the
// optimal decision.
int smallest_nonoffloading_distance(const SystemState& s, int horizon,
                                    PolicyEngine& engine);

// Two-coordinate slice of the decision surface: every other coordinate held
// fixed, the chosen pair swept over inclusive ranges.
struct SliceSpec {
  int x_deadline = 1;
  int y_deadline = 2;
  int x_max = 5;
  int y_max = 5;
  SystemState fixed;  // counts for the remaining coordinates
};

struct DecisionCell {
  int x = 0;
  int y = 0;
  int count = 0;
  StateKind kind = StateKind::kNonOffloading;
};

std::vector<DecisionCell> decision_map(const SliceSpec& slice, int horizon,
                                       PolicyEngine& engine);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_POLICY_HPP_
