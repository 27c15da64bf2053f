#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgeoffload/artifact_io.hpp"
#include "edgeoffload/experiments.hpp"

using namespace edgeoffload;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), "missing file: ", p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string table1_config(const std::string& kind, const std::string& extra) {
  return R"({"experiment": ")" + kind + R"(",
    "params": {"N": 3, "T": 100, "p_a": 0.7, "mu": 0.7,
               "arrival": [0.5, 0.16666666666666666, 0.16666666666666666, 0.16666666666666666],
               "C_o": 1.0, "C_p": 3.0},
    "seed": 7,)" +
         "\"" + kind + "\": " + extra + "}";
}

bool has_violation(const ValidationResult& r, const std::string& path) {
  for (const auto& v : r.violations)
    if (v.path == path) return true;
  return false;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("edgeoffload_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config validation reports every violation with its path") {
  SUBCASE("arrival probabilities must sum to one") {
    const std::string text = R"({"experiment": "solve",
      "params": {"N": 3, "T": 10, "p_a": 0.5, "mu": 0.5,
                 "arrival": [0.5, 0.3, 0.1, 0.2], "C_o": 1.0, "C_p": 3.0},
      "solve": {"states": [[0,0,1]]}})";
    const ValidationResult r = validate_config(text);
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "params.arrival"));
  }

  SUBCASE("the expiry penalty must exceed the offload cost") {
    const std::string text = R"({"experiment": "solve",
      "params": {"N": 2, "T": 10, "p_a": 0.5, "mu": 0.5,
                 "arrival": [0.5, 0.25, 0.25], "C_o": 2.0, "C_p": 2.0},
      "solve": {"states": [[0,1]]}})";
    const ValidationResult r = validate_config(text);
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "params.C_p"));
  }

  SUBCASE("multiple violations are collected, not just the first") {
    const std::string text = R"({"experiment": "solve",
      "params": {"T": 10, "p_a": 1.5, "mu": 0.5,
                 "arrival": [1.0], "C_o": 1.0, "C_p": 3.0},
      "solve": {"states": [[0,1]]}})";
    const ValidationResult r = validate_config(text);
    CHECK_FALSE(r.ok());
    CHECK(r.violations.size() >= 2);
    CHECK(has_violation(r, "params.N"));
    CHECK(has_violation(r, "params.p_a"));
  }

  SUBCASE("not JSON at all") {
    const ValidationResult r = validate_config("p_a = 0.7");
    CHECK_FALSE(r.ok());
    REQUIRE(r.violations.size() == 1);
  }

  SUBCASE("unknown experiment kind") {
    const ValidationResult r = validate_config(table1_config("frobnicate", "{}"));
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "experiment"));
  }

  SUBCASE("state dimension mismatches are flagged") {
    const ValidationResult r =
        validate_config(table1_config("solve", R"({"states": [[0, 1]]})"));
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "solve.states[0]"));
  }

  SUBCASE("slice coordinates must differ") {
    const ValidationResult r = validate_config(
        table1_config("decision_map", R"({"x": 2, "y": 2, "fixed": {"n_3": 1}})"));
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "decision_map.y"));
  }
}

TEST_CASE("a valid config round-trips to one canonical form") {
  const std::string a = table1_config("solve", R"({"states": [[0,0,1],[0,1,0]]})");
  // Same document, different key order and whitespace.
  const std::string b = R"({
    "solve": {"states": [[0,0,1],[0,1,0]]},
    "seed": 7,
    "params": {"C_p": 3.0, "C_o": 1.0,
               "arrival": [0.5, 0.16666666666666666, 0.16666666666666666, 0.16666666666666666],
               "mu": 0.7, "p_a": 0.7, "T": 100, "N": 3},
    "experiment": "solve"})";
  const ValidationResult ra = validate_config(a);
  const ValidationResult rb = validate_config(b);
  REQUIRE(ra.ok());
  REQUIRE(rb.ok());
  CHECK(ra.config->config_hash == rb.config->config_hash);
  CHECK(ra.config->params.arrival == rb.config->params.arrival);
  CHECK(validate_config(a).config->config_hash == ra.config->config_hash);
}

TEST_CASE("every experiment kind matches its golden artifacts") {
  const fs::path golden(GOLDEN_DIR);
  const std::vector<std::pair<std::string, std::vector<std::string>>> kinds = {
      {"solve", {"solve.csv"}},
      {"decision_map", {"decision_map.csv"}},
      {"convexity", {"convexity.csv"}},
      {"adjacency_chain", {"adjacency_chain.csv"}},
      {"memory_study", {"memory_study.csv"}},
      {"simulate", {"simulate_replications.csv", "simulate_summary.json"}},
      {"sweep_threshold", {"sweep_threshold.csv", "sweep_threshold_summary.json"}},
      {"oracle_check", {"oracle_check.csv"}},
  };
  for (const auto& [kind, artifacts] : kinds) {
    CAPTURE(kind);
    const ValidationResult r = validate_config(read_file(golden / (kind + ".json")));
    REQUIRE_MESSAGE(r.ok(), "golden config for ", kind, " failed validation");
    RunOptions opts;
    opts.out_dir = fresh_dir(kind);
    opts.threads = 1;
    const RunOutcome outcome = run_experiment(*r.config, opts);
    CHECK(outcome.artifacts.size() == artifacts.size() + 1);  // + run_info.json
    for (const std::string& name : artifacts) {
      CAPTURE(name);
      CHECK(read_file(opts.out_dir / name) == read_file(golden / kind / name));
    }
    fs::remove_all(opts.out_dir);
  }
}

TEST_CASE("command line behavior") {
  const fs::path golden(GOLDEN_DIR);
  const fs::path out = fresh_dir("cli");
  const std::string bin = OFFLOADCTL_BIN;

  SUBCASE("a valid run writes the artifacts and exits cleanly") {
    const std::string cmd = bin + " simulate --config " +
                            (golden / "simulate.json").string() + " --out " +
                            out.string() + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(read_file(out / "simulate_replications.csv") ==
          read_file(golden / "simulate" / "simulate_replications.csv"));
  }

  SUBCASE("an invalid config exits with the config error code") {
    const fs::path bad = out / "bad.json";
    std::ofstream(bad) << R"({"experiment": "simulate", "params": {}})";
    const std::string cmd = bin + " simulate --config " + bad.string() + " --out " +
                            out.string() + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
  }

  SUBCASE("a mismatched subcommand is a config error") {
    const std::string cmd = bin + " solve --config " +
                            (golden / "simulate.json").string() + " --out " +
                            out.string() + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
  }

  fs::remove_all(out);
}

TEST_CASE("formatting helpers are deterministic and locale-free") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(to_hex(0) == "0000000000000000");
  CHECK(fnv1a64("abc") == fnv1a64("abc"));
  CHECK(fnv1a64("abc") != fnv1a64("abd"));
}
