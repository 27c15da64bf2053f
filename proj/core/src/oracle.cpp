#include "edgeoffload/oracle.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace edgeoffload {

namespace {

struct Term {
  double weight;
  SystemState state;
};

Cost value_rec(const SystemState& s, int horizon, const ModelParams& p,
               const OracleConfig& cfg, int* argmin);

// Expected continuation over arrival and service events for a fixed
// post-offload state; weights accumulated largest first.
Cost continuation(const SystemState& after_offload, int horizon,
                  const ModelParams& p, const OracleConfig& cfg,
                  bool mu_blind) {
  std::vector<Term> terms;
  terms.reserve(2 * (static_cast<std::size_t>(p.max_deadline) + 1));
  const SystemState shifted = shift_deadlines(after_offload).state;
  for (int k = 0; k <= p.max_deadline; ++k) {
    const double pk = p.arrival[static_cast<std::size_t>(k)];
    if (pk == 0.0) continue;
    const SystemState arrived = add_arrival(shifted, k);
    if (mu_blind) {
      terms.push_back({pk, process_most_imminent(arrived)});
    } else {
      terms.push_back({pk * p.local_prob, process_most_imminent(arrived)});
      terms.push_back({pk * (1.0 - p.local_prob), arrived});
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.weight > b.weight; });
  Cost acc = 0.0;
  for (const Term& t : terms) {
    if (t.weight == 0.0) continue;
    acc += t.weight * value_rec(t.state, horizon - 1, p, cfg, nullptr);
  }
  return acc;
}

Cost value_rec(const SystemState& s, int horizon, const ModelParams& p,
               const OracleConfig& cfg, int* argmin) {
  if (s.total() > cfg.max_total_tasks)
    throw OracleCapError("oracle: task total beyond cap");
  if (horizon == 0) {
    if (argmin) *argmin = 0;
    return 0.0;
  }

  const bool mu_blind = cfg.reading == NoRelayServiceReading::kMuBlind;
  const Cost no_relay = cost_without_relay(s, p) +
                        (horizon > 1 ? continuation(s, horizon, p, cfg, mu_blind) : 0.0);

  Cost best = 0.0;
  int best_count = 0;
  for (int count = 0; count <= s.total(); ++count) {
    const SystemState after = offload_most_imminent(s, count);
    Cost with_relay = cost_with_relay(s, count, p);
    if (horizon > 1) with_relay += continuation(after, horizon, p, cfg, false);
    const Cost total = p.relay_prob * with_relay + (1.0 - p.relay_prob) * no_relay;
    if (count == 0 || total <= best) {
      best = total;
      best_count = count;
    }
  }
  if (argmin) *argmin = best_count;
  return best;
}

void check_caps(const SystemState& s, int horizon, const OracleConfig& cfg) {
  if (horizon < 0) throw std::invalid_argument("oracle: negative horizon");
  if (horizon > cfg.max_horizon) throw OracleCapError("oracle: horizon beyond cap");
  if (s.size() > cfg.max_deadline) throw OracleCapError("oracle: dimension beyond cap");
  if (s.total() > cfg.max_total_tasks) throw OracleCapError("oracle: task total beyond cap");
}

}  // namespace

Cost oracle_value(const SystemState& s, int horizon, const ModelParams& p,
                  const OracleConfig& cfg) {
  check_caps(s, horizon, cfg);
  return value_rec(s, horizon, p, cfg, nullptr);
}

int oracle_policy(const SystemState& s, int horizon, const ModelParams& p,
                  const OracleConfig& cfg) {
  check_caps(s, horizon, cfg);
  if (horizon == 0) return 0;
  int argmin = 0;
  value_rec(s, horizon, p, cfg, &argmin);
  return argmin;
}

}  // namespace edgeoffload
