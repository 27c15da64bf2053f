#ifndef EDGEOFFLOAD_REDUCTION_HPP_
#define EDGEOFFLOAD_REDUCTION_HPP_

#include <utility>
#include <vector>

#include "edgeoffload/model.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

// A trimmed state has no doomed tasks: within any window of j slots inside the
// remaining horizon, at most j-1 queued tasks can be served locally, so the
// prefix sums over deadlines 1..j must stay below j. Tasks with deadlines
// beyond the horizon cannot expire in-episode and are exempt.
bool is_reduced(const SystemState& s, int horizon);

// All states satisfying is_reduced(-, horizon >= n). Sorted lexicographically.
// Their number is the n-th Catalan number, which caps n at 14.
std::vector<SystemState> enumerate_reduced(int n);

// Strips the doomed tasks: repeatedly removes, most imminent first, the
// overflow above each prefix capacity. Returns the residual state together
// with the removed count, which equals the number of tasks guaranteed to
// expire under purely local service. Removing that many most-imminent tasks
// from s directly yields the same residual.
std::pair<SystemState, int> to_reduced(const SystemState& s, int horizon);

// Per-deadline count of tasks that local service could still save, scanning
// deadlines upward against the cumulative service capacity.
SystemState serviceable_profile(const SystemState& s, int horizon);

// Decomposition of a state into its lean core plus a closed-form cost of the
// stripped tasks. Pushing `original` and `lean` through identical no-relay
// event sequences reaches the same reduced state, and their optimal expected
// costs differ exactly by `correction`.
struct LeanDecomposition {
  SystemState original;
  SystemState reduced;
  SystemState lean;          // componentwise max of serviceable and reduced
  SystemState serviceable;   // savable-task profile used to build `lean`
  int excess_offloaded = 0;  // tasks stripped by to_reduced
  Cost correction = 0.0;     // cost gap between original and lean
};

LeanDecomposition to_lean(const SystemState& s, int horizon, const ModelParams& p);

// Expected cost of the tasks present in s but not in lean: each such task at
// deadline d is offloaded at the first relay arrival within d slots, else it
// expires. Throws InvalidStatePairError unless lean <= s componentwise.
Cost lean_correction(const SystemState& s, const SystemState& lean,
                     const ModelParams& p);

// Fixed points of to_lean over deadlines 1..min(n, horizon); coordinates
// beyond the horizon are held at zero. Sorted lexicographically.
std::vector<SystemState> enumerate_lean(int n, int horizon);

// CSV rendering of a state family: header n_1,...,n_N, one state per row.
std::string states_to_csv(const std::vector<SystemState>& states);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_REDUCTION_HPP_
