#include "edgeoffload/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace edgeoffload {

namespace {

int live_span(const SystemState& s, int horizon) {
  return std::min(s.size(), horizon);
}

}  // namespace

bool is_reduced(const SystemState& s, int horizon) {
  int prefix = 0;
  for (int j = 1; j <= live_span(s, horizon); ++j) {
    prefix += s.at(j);
    if (prefix > j - 1) return false;
  }
  return true;
}

std::vector<SystemState> enumerate_reduced(int n) {
  if (n < 1 || n > 14) throw std::invalid_argument("enumerate_reduced: n must be in [1, 14]");
  std::vector<SystemState> out;
  SystemState cur(n);
  // Depth-first over prefix-feasible counts keeps the scan at Catalan size.
  std::function<void(int, int)> rec = [&](int d, int prefix) {
    if (d > n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; prefix + c <= d - 1; ++c) {
      cur.set(d, c);
      rec(d + 1, prefix + c);
    }
    cur.set(d, 0);
  };
  rec(1, 0);
  std::sort(out.begin(), out.end(), [](const SystemState& a, const SystemState& b) {
    return a.counts() < b.counts();
  });
  return out;
}

std::pair<SystemState, int> to_reduced(const SystemState& s, int horizon) {
  SystemState work = s;
  int stripped = 0;
  for (int j = 1; j <= live_span(s, horizon); ++j) {
    int prefix = 0;
    for (int d = 1; d <= j; ++d) prefix += work.at(d);
    const int overflow = prefix - (j - 1);
    if (overflow > 0) {
      work = offload_most_imminent(work, overflow);
      stripped += overflow;
    }
  }
  return {work, stripped};
}

SystemState serviceable_profile(const SystemState& s, int horizon) {
  SystemState gamma(s.size());
  int kept = 0;
  for (int j = 2; j <= live_span(s, horizon); ++j) {
    const int g = std::max(0, std::min(s.at(j), j - 1 - kept));
    gamma.set(j, g);
    kept += g;
  }
  return gamma;
}

Cost lean_correction(const SystemState& s, const SystemState& lean,
                     const ModelParams& p) {
  if (!lean.dominated_by(s))
    throw InvalidStatePairError("lean state exceeds the original componentwise");
  const int n = s.size();
  const double miss = 1.0 - p.relay_prob;
  double offload_part = 0.0;
  double expiry_tail = 0.0;
  double excess_prefix = 0.0;
  double total_excess = 0.0;
  double miss_pow = 1.0;  // miss^i, updated per deadline
  for (int i = 1; i <= n; ++i) {
    const double excess = s.at(i) - lean.at(i);
    miss_pow *= miss;
    offload_part += excess * (1.0 - miss_pow);
    excess_prefix += excess;
    if (i <= n - 1) expiry_tail += miss_pow * excess_prefix;
    total_excess += excess;
  }
  return p.offload_cost * offload_part +
         p.expiry_penalty * p.relay_prob * expiry_tail +
         p.expiry_penalty * miss_pow * total_excess;
}

LeanDecomposition to_lean(const SystemState& s, int horizon, const ModelParams& p) {
  LeanDecomposition d;
  d.original = s;
  auto [reduced, stripped] = to_reduced(s, horizon);
  d.reduced = reduced;
  d.excess_offloaded = stripped;
  d.serviceable = serviceable_profile(s, horizon);
  d.lean = SystemState(s.size());
  for (int i = 1; i <= s.size(); ++i)
    d.lean.set(i, std::max(d.serviceable.at(i), d.reduced.at(i)));
  d.correction = lean_correction(s, d.lean, p);
  return d;
}

std::vector<SystemState> enumerate_lean(int n, int horizon) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumerate_lean: n must be in [1, 8]");
  // Reference params: the lean map itself does not depend on costs or
  // probabilities, only the correction does.
  const ModelParams ref = ModelParams::uniform_arrivals(n, std::max(horizon, 1),
                                                        0.5, 0.5, 0.5, 1.0, 2.0);
  std::vector<SystemState> out;
  SystemState cur(n);
  const int span = std::min(n, horizon);
  // Any lean coordinate is bounded by d-1: both the reduced residual and the
  // serviceable profile obey the prefix capacities.
  std::function<void(int)> rec = [&](int d) {
    if (d > span) {
      if (to_lean(cur, horizon, ref).lean == cur) out.push_back(cur);
      return;
    }
    for (int c = 0; c <= d - 1; ++c) {
      cur.set(d, c);
      rec(d + 1);
    }
    cur.set(d, 0);
  };
  rec(1);
  std::sort(out.begin(), out.end(), [](const SystemState& a, const SystemState& b) {
    return a.counts() < b.counts();
  });
  return out;
}

std::string states_to_csv(const std::vector<SystemState>& states) {
  if (states.empty()) throw std::invalid_argument("states_to_csv: empty family");
  const int n = states.front().size();
  std::string out;
  for (int d = 1; d <= n; ++d) {
    if (d > 1) out += ',';
    out += "n_" + std::to_string(d);
  }
  out += '\n';
  for (const SystemState& s : states) {
    if (s.size() != n) throw std::invalid_argument("states_to_csv: mixed dimensions");
    for (int d = 1; d <= n; ++d) {
      if (d > 1) out += ',';
      out += std::to_string(s.at(d));
    }
    out += '\n';
  }
  return out;
}

}  // namespace edgeoffload
