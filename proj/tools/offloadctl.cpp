// Experiment runner: one declarative config in, deterministic data artifacts out.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgeoffload/experiments.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitInternalError = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void emit_config_error(const std::vector<edgeoffload::ConfigViolation>& violations) {
  nlohmann::json record;
  record["error"] = "config";
  record["violations"] = nlohmann::json::array();
  for (const auto& v : violations)
    record["violations"].push_back({{"path", v.path}, {"message", v.message}});
  std::cerr << record.dump(2) << "\n";
}

void emit_internal_error(const std::string& message) {
  nlohmann::json record;
  record["error"] = "internal";
  record["message"] = message;
  std::cerr << record.dump(2) << "\n";
}

int run_kind(edgeoffload::ExperimentKind kind, const CommonArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in) {
    emit_config_error({{"", "cannot open config file: " + args.config_path}});
    return kExitConfigError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  edgeoffload::ValidationResult validated = edgeoffload::validate_config(buffer.str());
  if (!validated.ok()) {
    emit_config_error(validated.violations);
    return kExitConfigError;
  }
  if (validated.config->kind != kind) {
    emit_config_error({{"experiment", "config declares '" +
                                          kind_name(validated.config->kind) +
                                          "' but the subcommand is '" +
                                          kind_name(kind) + "'"}});
    return kExitConfigError;
  }

  edgeoffload::RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.seed_override = args.seed;
  opts.threads = args.threads;
  try {
    edgeoffload::RunOutcome outcome = edgeoffload::run_experiment(*validated.config, opts);
    for (const auto& path : outcome.artifacts) std::cout << path.string() << "\n";
  } catch (const std::exception& e) {
    emit_internal_error(e.what());
    return kExitInternalError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon offload policy toolkit"};
  app.require_subcommand(1);

  const std::vector<edgeoffload::ExperimentKind> kinds = {
      edgeoffload::ExperimentKind::kSolve,
      edgeoffload::ExperimentKind::kDecisionMap,
      edgeoffload::ExperimentKind::kConvexity,
      edgeoffload::ExperimentKind::kAdjacencyChain,
      edgeoffload::ExperimentKind::kMemoryStudy,
      edgeoffload::ExperimentKind::kSimulate,
      edgeoffload::ExperimentKind::kSweepThreshold,
      edgeoffload::ExperimentKind::kOracleCheck,
  };
  static const std::map<edgeoffload::ExperimentKind, std::string> descriptions = {
      {edgeoffload::ExperimentKind::kSolve, "optimal cost and decision per state"},
      {edgeoffload::ExperimentKind::kDecisionMap, "decision surface over a 2-D state slice"},
      {edgeoffload::ExperimentKind::kConvexity, "offload-count cost curves with minima"},
      {edgeoffload::ExperimentKind::kAdjacencyChain, "decisions along an adjacency chain"},
      {edgeoffload::ExperimentKind::kMemoryStudy, "memo entry counts with and without state rewriting"},
      {edgeoffload::ExperimentKind::kSimulate, "Monte Carlo run of one policy"},
      {edgeoffload::ExperimentKind::kSweepThreshold, "threshold-policy sweep with common random numbers"},
      {edgeoffload::ExperimentKind::kOracleCheck, "solver vs exhaustive ground truth"},
  };

  CommonArgs args;
  std::vector<std::pair<CLI::App*, edgeoffload::ExperimentKind>> subcommands;
  for (auto kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind_name(kind), descriptions.at(kind));
    sub->add_option("--config", args.config_path, "experiment config file (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--threads", args.threads, "worker threads (0 = auto)");
    subcommands.emplace_back(sub, kind);
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [sub, kind] : subcommands)
    if (sub->parsed()) return run_kind(kind, args);
  return kExitConfigError;
}
