#include "edgeoffload/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <json.hpp>

#include "edgeoffload/artifact_io.hpp"
#include "edgeoffload/dp.hpp"
#include "edgeoffload/lean_table.hpp"
#include "edgeoffload/oracle.hpp"
#include "edgeoffload/reduction.hpp"

namespace edgeoffload {

using nlohmann::json;

const char* kToolName = "offloadctl";
const char* kToolVersion = "1.0.0";

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSolve: return "solve";
    case ExperimentKind::kDecisionMap: return "decision_map";
    case ExperimentKind::kConvexity: return "convexity";
    case ExperimentKind::kAdjacencyChain: return "adjacency_chain";
    case ExperimentKind::kMemoryStudy: return "memory_study";
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kSweepThreshold: return "sweep_threshold";
    case ExperimentKind::kOracleCheck: return "oracle_check";
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_name(std::string_view name) {
  static const std::map<std::string_view, ExperimentKind> table = {
      {"solve", ExperimentKind::kSolve},
      {"decision_map", ExperimentKind::kDecisionMap},
      {"convexity", ExperimentKind::kConvexity},
      {"adjacency_chain", ExperimentKind::kAdjacencyChain},
      {"memory_study", ExperimentKind::kMemoryStudy},
      {"simulate", ExperimentKind::kSimulate},
      {"sweep_threshold", ExperimentKind::kSweepThreshold},
      {"oracle_check", ExperimentKind::kOracleCheck},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

class Violations {
 public:
  void add(std::string path, std::string message) {
    items_.push_back({std::move(path), std::move(message)});
  }
  bool empty() const { return items_.empty(); }
  std::vector<ConfigViolation> take() { return std::move(items_); }

 private:
  std::vector<ConfigViolation> items_;
};

bool is_int(const json& j) { return j.is_number_integer() || j.is_number_unsigned(); }

std::optional<int> get_int(const json& obj, const std::string& field,
                           const std::string& path, Violations& v,
                           bool required, int fallback, int lo, int hi) {
  if (!obj.contains(field)) {
    if (required) {
      v.add(path, "missing required integer field");
      return std::nullopt;
    }
    return fallback;
  }
  const json& j = obj.at(field);
  if (!is_int(j)) {
    v.add(path, "must be an integer");
    return std::nullopt;
  }
  const auto value = j.get<std::int64_t>();
  if (value < lo || value > hi) {
    v.add(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return std::nullopt;
  }
  return static_cast<int>(value);
}

std::optional<double> get_double(const json& obj, const std::string& field,
                                 const std::string& path, Violations& v,
                                 bool required, double fallback) {
  if (!obj.contains(field)) {
    if (required) {
      v.add(path, "missing required number field");
      return std::nullopt;
    }
    return fallback;
  }
  const json& j = obj.at(field);
  if (!j.is_number()) {
    v.add(path, "must be a number");
    return std::nullopt;
  }
  return j.get<double>();
}

bool get_bool(const json& obj, const std::string& field, const std::string& path,
              Violations& v, bool fallback) {
  if (!obj.contains(field)) return fallback;
  const json& j = obj.at(field);
  if (!j.is_boolean()) {
    v.add(path, "must be a boolean");
    return fallback;
  }
  return j.get<bool>();
}

std::optional<SystemState> parse_state(const json& j, int n, const std::string& path,
                                       Violations& v) {
  if (!j.is_array()) {
    v.add(path, "must be an array of task counts");
    return std::nullopt;
  }
  if (static_cast<int>(j.size()) != n) {
    v.add(path, "must have exactly N = " + std::to_string(n) + " entries");
    return std::nullopt;
  }
  std::vector<int> counts;
  counts.reserve(j.size());
  for (const json& e : j) {
    if (!is_int(e) || e.get<std::int64_t>() < 0) {
      v.add(path, "entries must be non-negative integers");
      return std::nullopt;
    }
    counts.push_back(e.get<int>());
  }
  return SystemState(std::span<const int>(counts));
}

std::vector<SystemState> parse_states(const json& obj, const std::string& field,
                                      int n, const std::string& path, Violations& v) {
  std::vector<SystemState> out;
  if (!obj.contains(field)) {
    v.add(path, "missing required state list");
    return out;
  }
  const json& j = obj.at(field);
  if (!j.is_array() || j.empty()) {
    v.add(path, "must be a non-empty array of states");
    return out;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto s = parse_state(j[i], n, path + "[" + std::to_string(i) + "]", v);
    if (s) out.push_back(*s);
  }
  return out;
}

std::optional<ModelParams> parse_params(const json& root, Violations& v) {
  if (!root.contains("params") || !root.at("params").is_object()) {
    v.add("params", "missing required params object");
    return std::nullopt;
  }
  const json& p = root.at("params");
  ModelParams out;
  bool ok = true;

  auto n = get_int(p, "N", "params.N", v, true, 0, 1, SystemState::kMaxDeadline);
  auto t = get_int(p, "T", "params.T", v, true, 0, 1, 10'000'000);
  auto pa = get_double(p, "p_a", "params.p_a", v, true, 0.0);
  auto mu = get_double(p, "mu", "params.mu", v, true, 0.0);
  auto co = get_double(p, "C_o", "params.C_o", v, true, 0.0);
  auto cp = get_double(p, "C_p", "params.C_p", v, true, 0.0);
  ok = n && t && pa && mu && co && cp;

  if (pa && (*pa < 0.0 || *pa > 1.0)) {
    v.add("params.p_a", "must be a probability in [0, 1]");
    ok = false;
  }
  if (mu && (*mu < 0.0 || *mu > 1.0)) {
    v.add("params.mu", "must be a probability in [0, 1]");
    ok = false;
  }
  if (co && !(*co > 0.0)) {
    v.add("params.C_o", "must be positive");
    ok = false;
  }
  if (co && cp && !(*cp > *co)) {
    v.add("params.C_p", "the expiry penalty must exceed the offload cost C_o");
    ok = false;
  }

  if (!p.contains("arrival") || !p.at("arrival").is_array()) {
    v.add("params.arrival", "missing required probability vector");
    ok = false;
  } else if (n) {
    const json& a = p.at("arrival");
    if (static_cast<int>(a.size()) != *n + 1) {
      v.add("params.arrival", "must have N + 1 entries (index 0 = no arrival)");
      ok = false;
    } else {
      double sum = 0.0;
      bool entries_ok = true;
      for (const json& e : a) {
        if (!e.is_number() || e.get<double>() < 0.0 || e.get<double>() > 1.0) {
          v.add("params.arrival", "entries must be probabilities in [0, 1]");
          entries_ok = false;
          break;
        }
        sum += e.get<double>();
      }
      if (entries_ok && std::abs(sum - 1.0) > 1e-12) {
        v.add("params.arrival", "probabilities must sum to 1");
        ok = false;
      } else if (entries_ok) {
        out.arrival = a.get<std::vector<double>>();
      } else {
        ok = false;
      }
    }
  }

  if (!ok) return std::nullopt;
  out.max_deadline = *n;
  out.horizon = *t;
  out.relay_prob = *pa;
  out.local_prob = *mu;
  out.offload_cost = *co;
  out.expiry_penalty = *cp;
  return out;
}

int spec_horizon(const json& obj, const ModelParams& params, const std::string& path,
                 Violations& v) {
  auto h = get_int(obj, "horizon", path + ".horizon", v, false, params.horizon, 1,
                   10'000'000);
  return h ? *h : params.horizon;
}

PolicySpec parse_policy(const json& obj, const std::string& path, Violations& v) {
  PolicySpec spec;
  if (!obj.contains("policy") || !obj.at("policy").is_string()) {
    v.add(path + ".policy", "missing required policy name");
    return spec;
  }
  const std::string name = obj.at("policy").get<std::string>();
  if (name == "optimal") {
    spec = PolicySpec::optimal();
  } else if (name == "threshold") {
    auto b = get_int(obj, "threshold_B", path + ".threshold_B", v, true, 0, 0, 1'000'000);
    if (b) spec = PolicySpec::threshold(*b);
  } else if (name == "expiry_driven") {
    spec = PolicySpec::expiry_driven();
  } else if (name == "random") {
    spec = PolicySpec::random();
  } else if (name == "on_the_spot") {
    spec = PolicySpec::on_the_spot();
  } else {
    v.add(path + ".policy",
          "must be one of optimal, threshold, expiry_driven, random, on_the_spot");
  }
  return spec;
}

}  // namespace

ValidationResult validate_config(const std::string& raw_text) {
  ValidationResult result;
  Violations v;

  json root = json::parse(raw_text, nullptr, false);
  if (root.is_discarded()) {
    v.add("", "not a valid JSON document");
    result.violations = v.take();
    return result;
  }
  if (!root.is_object()) {
    v.add("", "top level must be an object");
    result.violations = v.take();
    return result;
  }

  ExperimentConfig cfg;

  if (!root.contains("experiment") || !root.at("experiment").is_string()) {
    v.add("experiment", "missing required experiment kind");
  } else {
    auto kind = kind_from_name(root.at("experiment").get<std::string>());
    if (!kind) {
      v.add("experiment", "unknown experiment kind");
    } else {
      cfg.kind = *kind;
    }
  }

  auto params = parse_params(root, v);
  if (params) cfg.params = *params;

  if (root.contains("seed")) {
    if (!is_int(root.at("seed")) || root.at("seed").get<std::int64_t>() < 0)
      v.add("seed", "must be a non-negative integer");
    else
      cfg.seed = root.at("seed").get<std::uint64_t>();
  }

  // Kind-specific block, keyed by the kind's name.
  if (params) {
    const int n = params->max_deadline;
    const std::string key = kind_name(cfg.kind);
    const json block = root.contains(key) && root.at(key).is_object()
                           ? root.at(key)
                           : json::object();
    switch (cfg.kind) {
      case ExperimentKind::kSolve: {
        cfg.solve.states = parse_states(block, "states", n, key + ".states", v);
        cfg.solve.horizon = spec_horizon(block, *params, key, v);
        break;
      }
      case ExperimentKind::kDecisionMap: {
        auto x = get_int(block, "x", key + ".x", v, true, 0, 1, n);
        auto y = get_int(block, "y", key + ".y", v, true, 0, 2, n);
        auto xm = get_int(block, "x_max", key + ".x_max", v, false, 5, 0, 64);
        auto ym = get_int(block, "y_max", key + ".y_max", v, false, 5, 0, 64);
        cfg.decision_map.slice.fixed = SystemState(n);
        if (x && y) {
          if (*x == *y) v.add(key + ".y", "slice coordinates must differ");
          cfg.decision_map.slice.x_deadline = *x;
          cfg.decision_map.slice.y_deadline = *y;
        }
        if (xm) cfg.decision_map.slice.x_max = *xm;
        if (ym) cfg.decision_map.slice.y_max = *ym;
        if (block.contains("fixed")) {
          if (!block.at("fixed").is_object()) {
            v.add(key + ".fixed", "must map coordinate names n_<d> to counts");
          } else {
            for (const auto& [name, val] : block.at("fixed").items()) {
              int d = 0;
              if (name.size() > 2 && name.rfind("n_", 0) == 0) d = std::atoi(name.c_str() + 2);
              if (d < 1 || d > n) {
                v.add(key + ".fixed." + name, "unknown coordinate");
                continue;
              }
              if (x && y && (d == *x || d == *y)) {
                v.add(key + ".fixed." + name, "coordinate is already swept by the slice");
                continue;
              }
              if (!is_int(val) || val.get<std::int64_t>() < 0) {
                v.add(key + ".fixed." + name, "must be a non-negative integer");
                continue;
              }
              cfg.decision_map.slice.fixed.set(d, val.get<int>());
            }
          }
        }
        cfg.decision_map.horizon = spec_horizon(block, *params, key, v);
        break;
      }
      case ExperimentKind::kConvexity: {
        cfg.convexity.states = parse_states(block, "states", n, key + ".states", v);
        cfg.convexity.horizon = spec_horizon(block, *params, key, v);
        break;
      }
      case ExperimentKind::kAdjacencyChain: {
        cfg.adjacency_chain.chain = parse_states(block, "chain", n, key + ".chain", v);
        if (cfg.adjacency_chain.chain.size() == 1)
          v.add(key + ".chain", "needs at least two states");
        cfg.adjacency_chain.horizon = spec_horizon(block, *params, key, v);
        break;
      }
      case ExperimentKind::kMemoryStudy: {
        if (!block.contains("N_values") || !block.at("N_values").is_array() ||
            block.at("N_values").empty()) {
          v.add(key + ".N_values", "missing required list of state dimensions");
        } else {
          for (const json& e : block.at("N_values")) {
            if (!is_int(e) || e.get<int>() < 1 || e.get<int>() > 8) {
              v.add(key + ".N_values", "entries must be integers in [1, 8]");
              break;
            }
            cfg.memory_study.deadline_values.push_back(e.get<int>());
          }
        }
        auto tmax = get_int(block, "T_max", key + ".T_max", v, false, 15, 1, 50);
        if (tmax) cfg.memory_study.horizon_max = *tmax;
        break;
      }
      case ExperimentKind::kSimulate: {
        cfg.simulate.policy = parse_policy(block, key, v);
        auto reps = get_int(block, "replications", key + ".replications", v, false, 30,
                            1, 1'000'000);
        if (reps) cfg.simulate.replications = *reps;
        cfg.simulate.initial_state = SystemState(n);
        if (block.contains("initial_state")) {
          auto s = parse_state(block.at("initial_state"), n, key + ".initial_state", v);
          if (s) cfg.simulate.initial_state = *s;
        }
        cfg.simulate.restrict_to_reduced =
            get_bool(block, "restrict_to_reduced", key + ".restrict_to_reduced", v, false);
        cfg.simulate.record_slot_costs =
            get_bool(block, "slot_costs", key + ".slot_costs", v, false);
        break;
      }
      case ExperimentKind::kSweepThreshold: {
        auto lo = get_int(block, "B_min", key + ".B_min", v, true, 0, 0, 1'000'000);
        auto hi = get_int(block, "B_max", key + ".B_max", v, true, 0, 0, 1'000'000);
        if (lo) cfg.sweep_threshold.threshold_min = *lo;
        if (hi) cfg.sweep_threshold.threshold_max = *hi;
        if (lo && hi && *hi < *lo) v.add(key + ".B_max", "must be >= B_min");
        auto reps = get_int(block, "replications", key + ".replications", v, false, 30,
                            1, 1'000'000);
        if (reps) cfg.sweep_threshold.replications = *reps;
        cfg.sweep_threshold.restrict_to_reduced =
            get_bool(block, "restrict_to_reduced", key + ".restrict_to_reduced", v, false);
        break;
      }
      case ExperimentKind::kOracleCheck: {
        auto mn = get_int(block, "max_N", key + ".max_N", v, false, 3, 1, 4);
        auto mt = get_int(block, "max_total", key + ".max_total", v, false, 4, 0, 8);
        auto mh = get_int(block, "max_horizon", key + ".max_horizon", v, false, 4, 1, 6);
        if (mn) cfg.oracle_check.max_deadline = *mn;
        if (mt) cfg.oracle_check.max_total = *mt;
        if (mh) cfg.oracle_check.max_horizon = *mh;
        if (block.contains("reading")) {
          const json& r = block.at("reading");
          if (!r.is_string() ||
              (r.get<std::string>() != "symmetric" && r.get<std::string>() != "mu_blind"))
            v.add(key + ".reading", "must be \"symmetric\" or \"mu_blind\"");
          else
            cfg.oracle_check.mu_blind_reading = r.get<std::string>() == "mu_blind";
        }
        break;
      }
    }
  }

  if (!v.empty()) {
    result.violations = v.take();
    return result;
  }

  cfg.config_hash = to_hex(fnv1a64(root.dump()));
  result.config = std::move(cfg);
  return result;
}

namespace {

std::string state_cell(const SystemState& s) {
  std::string out;
  for (int d = 1; d <= s.size(); ++d) {
    if (d > 1) out += ';';
    out += std::to_string(s.at(d));
  }
  return out;
}

std::string kind_cell(StateKind kind) {
  return kind == StateKind::kOffloading ? "offloading" : "non_offloading";
}

json params_echo(const ModelParams& p) {
  json out;
  out["N"] = p.max_deadline;
  out["T"] = p.horizon;
  out["p_a"] = p.relay_prob;
  out["mu"] = p.local_prob;
  out["arrival"] = p.arrival;
  out["C_o"] = p.offload_cost;
  out["C_p"] = p.expiry_penalty;
  return out;
}

struct Staged {
  std::filesystem::path path;
  std::string content;
};

json aggregate_json(const SimAggregate& a) {
  json out;
  out["replications"] = a.replications;
  out["mean_cost_per_slot"] = a.mean_cost_per_slot;
  out["ci95_cost_per_slot"] = {a.mean_cost_per_slot - a.ci_half_cost_per_slot,
                               a.mean_cost_per_slot + a.ci_half_cost_per_slot};
  out["mean_cost_per_task"] = a.mean_cost_per_task;
  out["ci95_cost_per_task"] = {a.mean_cost_per_task - a.ci_half_cost_per_task,
                               a.mean_cost_per_task + a.ci_half_cost_per_task};
  out["mean_local_utilization"] = a.mean_local_utilization;
  return out;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.params.validate();
  const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
  ArtifactMeta meta{kToolName, kToolVersion, cfg.config_hash, seed};

  std::vector<Staged> staged;
  const auto stage = [&staged, &opts](const std::string& name, std::string content) {
    staged.push_back({opts.out_dir / name, std::move(content)});
  };

  switch (cfg.kind) {
    case ExperimentKind::kSolve: {
      PolicyEngine engine(cfg.params);
      CsvBuilder csv(meta, {"state", "J", "L_star"});
      for (const SystemState& s : cfg.solve.states) {
        const Cost j = engine.solver().value(s, cfg.solve.horizon);
        const Decision d = engine.decide(s, cfg.solve.horizon);
        csv.add_row({state_cell(s), format_double(j), std::to_string(d.count)});
      }
      stage("solve.csv", csv.content());
      break;
    }
    case ExperimentKind::kDecisionMap: {
      PolicyEngine engine(cfg.params);
      const SliceSpec& slice = cfg.decision_map.slice;
      CsvBuilder csv(meta, {"n_" + std::to_string(slice.x_deadline),
                            "n_" + std::to_string(slice.y_deadline), "L_star", "class"});
      for (const DecisionCell& cell :
           decision_map(slice, cfg.decision_map.horizon, engine)) {
        csv.add_row({std::to_string(cell.x), std::to_string(cell.y),
                     std::to_string(cell.count), kind_cell(cell.kind)});
      }
      stage("decision_map.csv", csv.content());
      break;
    }
    case ExperimentKind::kConvexity: {
      DpSolver solver(cfg.params);
      CsvBuilder csv(meta, {"state", "L", "F", "is_min"});
      for (const SystemState& s : cfg.convexity.states) {
        std::vector<Cost> curve;
        for (int count = s.at(1); count <= s.total(); ++count)
          curve.push_back(solver.offload_curve(s, count, cfg.convexity.horizon));
        // Largest minimizer, matching the decision tie-break.
        std::size_t best = 0;
        for (std::size_t i = 1; i < curve.size(); ++i)
          if (curve[i] <= curve[best]) best = i;
        for (std::size_t i = 0; i < curve.size(); ++i) {
          csv.add_row({state_cell(s), std::to_string(s.at(1) + static_cast<int>(i)),
                       format_double(curve[i]), i == best ? "1" : "0"});
        }
      }
      stage("convexity.csv", csv.content());
      break;
    }
    case ExperimentKind::kAdjacencyChain: {
      PolicyEngine engine(cfg.params);
      const auto& chain = cfg.adjacency_chain.chain;
      std::vector<int> decisions;
      decisions.reserve(chain.size());
      for (const SystemState& s : chain)
        decisions.push_back(engine.decide(s, cfg.adjacency_chain.horizon).count);
      CsvBuilder csv(meta,
                     {"index", "state", "L_star", "adjacent_to_prev", "consistent_with_next"});
      for (std::size_t i = 0; i < chain.size(); ++i) {
        std::string adjacent = i == 0 ? "" : (is_adjacent(chain[i - 1], chain[i]) ? "1" : "0");
        std::string consistent;
        if (i + 1 < chain.size()) {
          const int inferred =
              infer_from_adjacent(decisions[i + 1], ChainDirection::kTowardSmaller);
          consistent = decisions[i] == inferred ? "1" : "0";
        }
        csv.add_row({std::to_string(i + 1), state_cell(chain[i]),
                     std::to_string(decisions[i]), adjacent, consistent});
      }
      stage("adjacency_chain.csv", csv.content());
      break;
    }
    case ExperimentKind::kMemoryStudy: {
      // Workload: answer J_T for every state of the decision-surface sweep
      // (components 0..6), with and without rewriting states to their lean
      // cores before storing.
      constexpr int kGridCap = 6;
      CsvBuilder csv(meta, {"N", "T", "entries_plain", "entries_lean"});
      for (int n : cfg.memory_study.deadline_values) {
        ModelParams p = ModelParams::uniform_arrivals(
            n, cfg.memory_study.horizon_max, cfg.params.relay_prob,
            cfg.params.local_prob, cfg.params.arrival[0], cfg.params.offload_cost,
            cfg.params.expiry_penalty);
        std::vector<SystemState> roots;
        std::vector<int> counts(static_cast<std::size_t>(n), 0);
        while (true) {
          roots.emplace_back(std::span<const int>(counts));
          int d = 0;
          while (d < n) {
            if (++counts[static_cast<std::size_t>(d)] <= kGridCap) break;
            counts[static_cast<std::size_t>(d)] = 0;
            ++d;
          }
          if (d == n) break;
        }
        for (int t = 1; t <= cfg.memory_study.horizon_max; ++t) {
          DpSolver plain(p, {.lean_rewrite = false});
          DpSolver lean(p, {.lean_rewrite = true});
          for (const SystemState& root : roots) {
            plain.value(root, t);
            lean.value(root, t);
          }
          csv.add_row({std::to_string(n), std::to_string(t),
                       std::to_string(plain.memo().size()),
                       std::to_string(lean.memo().size())});
        }
      }
      stage("memory_study.csv", csv.content());
      break;
    }
    case ExperimentKind::kSimulate: {
      SimConfig sim;
      sim.params = cfg.params;
      sim.policy = cfg.simulate.policy;
      sim.replications = cfg.simulate.replications;
      sim.base_seed = seed;
      sim.initial_state = cfg.simulate.initial_state;
      sim.restrict_to_reduced = cfg.simulate.restrict_to_reduced;
      sim.record_slot_costs = cfg.simulate.record_slot_costs;
      sim.threads = opts.threads;

      std::unique_ptr<LeanTableSolver> table;
      if (sim.policy.kind == PolicySpec::Kind::kOptimal) {
        table = std::make_unique<LeanTableSolver>(cfg.params, cfg.params.horizon,
                                                  opts.threads);
        table->solve();
      }
      const SimResult result = run(sim, table.get());

      CsvBuilder csv(meta, {"replication", "slots", "total_cost", "cost_per_slot",
                            "cost_per_task", "arrived", "expired", "offloaded",
                            "processed", "local_opportunities", "local_used"});
      for (std::size_t r = 0; r < result.replications.size(); ++r) {
        const SimMetrics& m = result.replications[r];
        csv.add_row({std::to_string(r), std::to_string(m.slots),
                     format_double(m.total_cost), format_double(m.cost_per_slot()),
                     format_double(m.cost_per_task()), std::to_string(m.tasks_arrived),
                     std::to_string(m.tasks_expired), std::to_string(m.tasks_offloaded),
                     std::to_string(m.tasks_processed),
                     std::to_string(m.local_opportunities), std::to_string(m.local_used)});
      }
      stage("simulate_replications.csv", csv.content());

      json summary;
      summary["tool"] = std::string(kToolName) + " " + kToolVersion;
      summary["config_hash"] = cfg.config_hash;
      summary["seed"] = seed;
      summary["generator"] = CounterRng::kName;
      summary["policy"] = sim.policy.name();
      summary["params"] = params_echo(cfg.params);
      summary["restrict_to_reduced"] = sim.restrict_to_reduced;
      summary["aggregate"] = aggregate_json(result.aggregate);
      stage("simulate_summary.json", summary.dump(2) + "\n");
      break;
    }
    case ExperimentKind::kSweepThreshold: {
      SimConfig sim;
      sim.params = cfg.params;
      sim.replications = cfg.sweep_threshold.replications;
      sim.base_seed = seed;
      sim.initial_state = SystemState(cfg.params.max_deadline);
      sim.restrict_to_reduced = cfg.sweep_threshold.restrict_to_reduced;
      sim.threads = opts.threads;
      const ThresholdSweepResult sweep = sweep_threshold(
          sim, cfg.sweep_threshold.threshold_min, cfg.sweep_threshold.threshold_max);

      CsvBuilder csv(meta, {"B", "mean_cost_per_slot", "ci95_half_cost_per_slot",
                            "mean_cost_per_task", "ci95_half_cost_per_task",
                            "mean_local_utilization"});
      for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
        const SimAggregate& a = sweep.aggregates[i];
        csv.add_row({std::to_string(sweep.thresholds[i]),
                     format_double(a.mean_cost_per_slot),
                     format_double(a.ci_half_cost_per_slot),
                     format_double(a.mean_cost_per_task),
                     format_double(a.ci_half_cost_per_task),
                     format_double(a.mean_local_utilization)});
      }
      stage("sweep_threshold.csv", csv.content());

      json summary;
      summary["tool"] = std::string(kToolName) + " " + kToolVersion;
      summary["config_hash"] = cfg.config_hash;
      summary["seed"] = seed;
      summary["generator"] = CounterRng::kName;
      summary["params"] = params_echo(cfg.params);
      summary["best_B"] = sweep.best_threshold;
      stage("sweep_threshold_summary.json", summary.dump(2) + "\n");
      break;
    }
    case ExperimentKind::kOracleCheck: {
      OracleConfig ocfg;
      ocfg.max_deadline = cfg.oracle_check.max_deadline;
      ocfg.max_horizon = cfg.oracle_check.max_horizon;
      ocfg.max_total_tasks =
          cfg.oracle_check.max_total + cfg.oracle_check.max_horizon + 1;
      ocfg.reading = cfg.oracle_check.mu_blind_reading
                         ? NoRelayServiceReading::kMuBlind
                         : NoRelayServiceReading::kSymmetric;
      CsvBuilder csv(meta, {"N", "horizon", "cases", "max_value_gap",
                            "decision_mismatches"});
      for (int n = 1; n <= cfg.oracle_check.max_deadline; ++n) {
        ModelParams p = ModelParams::uniform_arrivals(
            n, cfg.oracle_check.max_horizon, cfg.params.relay_prob,
            cfg.params.local_prob, cfg.params.arrival[0], cfg.params.offload_cost,
            cfg.params.expiry_penalty);
        DpSolver solver(p);
        for (int h = 1; h <= cfg.oracle_check.max_horizon; ++h) {
          std::int64_t cases = 0, mismatches = 0;
          double max_gap = 0.0;
          std::vector<int> counts(static_cast<std::size_t>(n), 0);
          while (true) {
            int total = 0;
            for (int c : counts) total += c;
            if (total <= cfg.oracle_check.max_total) {
              const SystemState s{std::span<const int>(counts)};
              const double gap = std::abs(oracle_value(s, h, p, ocfg) - solver.value(s, h));
              max_gap = std::max(max_gap, gap);
              if (oracle_policy(s, h, p, ocfg) != solver.optimal_decision(s, h))
                ++mismatches;
              ++cases;
            }
            int d = 0;
            while (d < n) {
              if (++counts[static_cast<std::size_t>(d)] <= cfg.oracle_check.max_total)
                break;
              counts[static_cast<std::size_t>(d)] = 0;
              ++d;
            }
            if (d == n) break;
          }
          csv.add_row({std::to_string(n), std::to_string(h), std::to_string(cases),
                       format_double(max_gap), std::to_string(mismatches)});
        }
      }
      stage("oracle_check.csv", csv.content());
      break;
    }
  }

  // Timestamped sidecar; not part of the deterministic artifact set.
  {
    json info;
    info["tool"] = std::string(kToolName) + " " + kToolVersion;
    info["experiment"] = kind_name(cfg.kind);
    info["config_hash"] = cfg.config_hash;
    info["seed"] = seed;
    info["completed_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    staged.push_back({opts.out_dir / "run_info.json", info.dump(2) + "\n"});
  }

  RunOutcome outcome;
  std::filesystem::create_directories(opts.out_dir);
  try {
    for (const Staged& s : staged) {
      write_file(s.path, s.content);
      outcome.artifacts.push_back(s.path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& written : outcome.artifacts) std::filesystem::remove(written, ec);
    throw;
  }
  return outcome;
}

}  // namespace edgeoffload
