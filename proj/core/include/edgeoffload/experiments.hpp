#ifndef EDGEOFFLOAD_EXPERIMENTS_HPP_
#define EDGEOFFLOAD_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgeoffload/model.hpp"
#include "edgeoffload/policy.hpp"
#include "edgeoffload/sim.hpp"
#include "edgeoffload/types.hpp"

namespace edgeoffload {

extern const char* kToolName;
extern const char* kToolVersion;

enum class ExperimentKind {
  kSolve,
  kDecisionMap,
  kConvexity,
  kAdjacencyChain,
  kMemoryStudy,
  kSimulate,
  kSweepThreshold,
  kOracleCheck,
};

std::string kind_name(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_name(std::string_view name);

struct SolveSpec {
  std::vector<SystemState> states;
  int horizon = 0;  // 0 = params horizon
};

struct DecisionMapSpec {
  SliceSpec slice;
  int horizon = 0;
};

struct ConvexitySpec {
  std::vector<SystemState> states;
  int horizon = 0;
};

struct AdjacencyChainSpec {
  std::vector<SystemState> chain;
  int horizon = 0;
};

struct MemoryStudySpec {
  std::vector<int> deadline_values;
  int horizon_max = 15;
};

struct SimulateSpec {
  PolicySpec policy;
  int replications = 30;
  SystemState initial_state;  // empty -> zero state
  bool restrict_to_reduced = false;
  bool record_slot_costs = false;
};

struct SweepThresholdSpec {
  int threshold_min = 0;
  int threshold_max = 0;
  int replications = 30;
  bool restrict_to_reduced = false;
};

struct OracleCheckSpec {
  int max_deadline = 3;
  int max_total = 4;
  int max_horizon = 4;
  bool mu_blind_reading = false;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSolve;
  ModelParams params;
  std::uint64_t seed = 0;

  SolveSpec solve;
  DecisionMapSpec decision_map;
  ConvexitySpec convexity;
  AdjacencyChainSpec adjacency_chain;
  MemoryStudySpec memory_study;
  SimulateSpec simulate;
  SweepThresholdSpec sweep_threshold;
  OracleCheckSpec oracle_check;

  std::string config_hash;  // over the canonical serialized form
};

struct ConfigViolation {
  std::string path;     // e.g. "params.arrival"
  std::string message;
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigViolation> violations;
  bool ok() const { return config.has_value(); }
};

// Parses and validates a raw config document; reports every violation found,
// not just the first.
ValidationResult validate_config(const std::string& raw_text);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

struct RunOutcome {
  std::vector<std::filesystem::path> artifacts;
};

// Executes one experiment, writing its artifacts (plus a timestamped
// run_info.json sidecar) into out_dir. Throws on internal failure after
// removing any partially written artifacts.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_EXPERIMENTS_HPP_
