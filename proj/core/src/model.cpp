#include "edgeoffload/model.hpp"

#include <cmath>
#include <string>

namespace edgeoffload {

void ModelParams::validate() const {
  if (max_deadline < 1 || max_deadline > SystemState::kMaxDeadline)
    throw std::invalid_argument("max_deadline must be in [1, 16]");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (relay_prob < 0.0 || relay_prob > 1.0)
    throw std::invalid_argument("relay_prob must be in [0, 1]");
  if (local_prob < 0.0 || local_prob > 1.0)
    throw std::invalid_argument("local_prob must be in [0, 1]");
  if (static_cast<int>(arrival.size()) != max_deadline + 1)
    throw std::invalid_argument("arrival must have max_deadline + 1 entries");
  double sum = 0.0;
  for (double p : arrival) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("arrival probabilities must be in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("arrival probabilities must sum to 1");
  if (!(offload_cost > 0.0))
    throw std::invalid_argument("offload_cost must be positive");
  if (!(expiry_penalty > offload_cost))
    throw std::invalid_argument("expiry_penalty must exceed offload_cost");
}

ModelParams ModelParams::uniform_arrivals(int n, int horizon, double relay_prob,
                                          double local_prob, double p0,
                                          double offload_cost,
                                          double expiry_penalty) {
  ModelParams p;
  p.max_deadline = n;
  p.horizon = horizon;
  p.relay_prob = relay_prob;
  p.local_prob = local_prob;
  p.arrival.assign(static_cast<std::size_t>(n) + 1, (1.0 - p0) / n);
  p.arrival[0] = p0;
  p.offload_cost = offload_cost;
  p.expiry_penalty = expiry_penalty;
  p.validate();
  return p;
}

SystemState offload_most_imminent(const SystemState& s, int count) {
  if (count < 0 || count > s.total())
    throw InvalidDecisionError("offload count " + std::to_string(count) +
                               " outside {0,...," + std::to_string(s.total()) + "}");
  SystemState out = s;
  int left = count;
  for (int d = 1; d <= s.size() && left > 0; ++d) {
    const int take = std::min(left, out.at(d));
    out.set(d, out.at(d) - take);
    left -= take;
  }
  return out;
}

ShiftResult shift_deadlines(const SystemState& s) {
  ShiftResult r;
  r.expired = s.at(1);
  r.state = SystemState(s.size());
  for (int d = 2; d <= s.size(); ++d) r.state.set(d - 1, s.at(d));
  return r;
}

SystemState add_arrival(const SystemState& s, int deadline) {
  if (deadline == 0) return s;
  if (deadline < 0 || deadline > s.size())
    throw InvalidArrivalError("arrival deadline " + std::to_string(deadline) +
                              " exceeds " + std::to_string(s.size()));
  SystemState out = s;
  out.set(deadline, out.at(deadline) + 1);
  return out;
}

SystemState process_most_imminent(const SystemState& s) {
  const int d = s.most_imminent_deadline();
  if (d == 0) return s;
  SystemState out = s;
  out.set(d, out.at(d) - 1);
  return out;
}

SystemState next_state(const SystemState& s, int count, int arrival_deadline,
                       bool local_service) {
  SystemState x = add_arrival(shift_deadlines(offload_most_imminent(s, count)).state,
                              arrival_deadline);
  return local_service ? process_most_imminent(x) : x;
}

Cost cost_with_relay(const SystemState& s, int count, const ModelParams& p) {
  if (count < 0 || count > s.total())
    throw InvalidDecisionError("offload count outside the feasible set");
  const int expiring = std::max(s.at(1) - count, 0);
  return p.offload_cost * count + p.expiry_penalty * expiring;
}

Cost cost_without_relay(const SystemState& s, const ModelParams& p) {
  return p.expiry_penalty * s.at(1);
}

Cost expected_instant_cost(const SystemState& s, int count, const ModelParams& p) {
  return p.relay_prob * cost_with_relay(s, count, p) +
         (1.0 - p.relay_prob) * cost_without_relay(s, p);
}

}  // namespace edgeoffload
