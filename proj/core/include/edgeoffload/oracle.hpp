#ifndef EDGEOFFLOAD_ORACLE_HPP_
#define EDGEOFFLOAD_ORACLE_HPP_

#include "edgeoffload/model.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

// The recursion behind the no-relay branch admits two readings of how local
// service enters; kMuBlind makes local service unconditional in that branch
// (the alternative is symmetric with the relay branch, which is what the
// solver implements). The difference is measurable whenever local_prob is
// strictly between 0 and 1.
enum class NoRelayServiceReading { kSymmetric, kMuBlind };

struct OracleConfig {
  int max_total_tasks = 12;  // per expanded node; arrivals grow the queue
  int max_horizon = 6;
  int max_deadline = 4;
  NoRelayServiceReading reading = NoRelayServiceReading::kSymmetric;
};

// Exact expected-cost ground truth by exhaustive expansion of the event tree
// and exhaustive minimization over offload counts. No memoization, no state
// rewriting; feasible only at tiny scale. Throws OracleCapError beyond the
// configured caps.
Cost oracle_value(const SystemState& s, int horizon, const ModelParams& p,
                  const OracleConfig& cfg = {});

// Exhaustive argmin companion; ties resolve to the largest minimizer.
int oracle_policy(const SystemState& s, int horizon, const ModelParams& p,
                  const OracleConfig& cfg = {});

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_ORACLE_HPP_
