#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "gibbsvs/experiment.hpp"
#include "gibbsvs/kernels.hpp"
#include "gibbsvs/suite.hpp"

using namespace gibbsvs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmall = R"(seed = 3
[generator]
kind = sparse-linear
n = 150
k = 8
support = 2
seed = 4
[sampler]
iterations = 200
burn_in = 50
chains = 2
scan_order = random-permutation
[evaluation]
holdout = 2000
max_draws = 100
)";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kSmall);
  CHECK(c.seed == 3);
  CHECK(c.generator.kind == GeneratorKind::sparse_linear);
  CHECK(c.data_seed() == 4);
  CHECK(c.n == 150);
  CHECK(c.chains == 2);
  CHECK(c.sampler.scan_order == ScanOrder::random_permutation);
  CHECK_FALSE(c.sigma.has_value());

  CHECK_THROWS_AS(parse_config("[generator]\nwidth = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[gen]\nn = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[risk]\npsi = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[risk]\nrho = 0,1,1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sampler]\niterations = many\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent.ini"), ConfigError);
}

TEST_CASE("echo and hash are stable") {
  const ExperimentConfig a = parse_config(kSmall);
  const ExperimentConfig b = parse_config(config_echo(a));
  CHECK(config_echo(a) == config_echo(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  ExperimentConfig c = a;
  c.seed = 4;
  CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"quick.ini", "misspecified.ini", "indicator_grid.ini", "sparse_linear.ini"}) {
    INFO(name);
    CHECK_NOTHROW(load_config(fs::path(GIBBSVS_CONFIG_DIR) / name));
  }
}

TEST_CASE("replaying a config gives identical files") {
  const ExperimentConfig c = load_config((fs::path(GIBBSVS_CONFIG_DIR) / "quick.ini").string());
  const fs::path base = fs::path(GIBBSVS_TEST_TMP) / "replay";
  fs::remove_all(base);
  write_report(run_experiment(c), (base / "a").string());
  write_report(run_experiment(c), (base / "b").string());
  for (const char* f : {"config.ini", "conditions.json", "trace.csv", "summary.json"}) {
    INFO(f);
    CHECK(fs::exists(base / "a" / f));
    CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
  }
  const auto summary = nlohmann::json::parse(slurp(base / "a" / "summary.json"));
  CHECK(summary.contains("gibbs_risk"));
  CHECK(summary["mle_risk"].is_number());
  CHECK(summary["config_hash"] == config_hash(c));
  CHECK(summary["risk_evaluation"] == "analytic");
}

TEST_CASE("quick misspecified run reports both risks") {
  const RunReport r = run_experiment(load_config((fs::path(GIBBSVS_CONFIG_DIR) / "quick.ini").string()));
  CHECK(r.gibbs_risk_analytic);
  REQUIRE(r.mle_risk.has_value());
  CHECK(*r.mle_risk == doctest::Approx(0.25));
  CHECK(r.gibbs_risk >= 0.125);
  CHECK(r.gibbs_risk <= 0.5);
  CHECK(r.traces.size() == 1);
}

TEST_CASE("output does not depend on the thread count") {
  const ExperimentConfig c = parse_config(kSmall);
  const int before = kernels::max_threads();
  kernels::set_threads(1);
  const RunReport a = run_experiment(c);
  kernels::set_threads(4);
  const RunReport b = run_experiment(c);
  kernels::set_threads(before);
  CHECK(a.summary_json == b.summary_json);
  REQUIRE(a.traces.size() == 2);
  CHECK(a.traces == b.traces);
  CHECK(a.conditions_json == b.conditions_json);
}

TEST_CASE("analytic evaluation needs a finite source") {
  ExperimentConfig c = parse_config(kSmall);
  c.analytic = true;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("suite names") {
  CHECK(available_suites() == std::vector<std::string>{"paper-repro", "oracle-checks", "all"});
  CHECK(suite_criteria("oracle-checks", GIBBSVS_TEST_TMP).size() == 6);
  CHECK(suite_criteria("all", GIBBSVS_TEST_TMP).size() == 10);
  try {
    suite_criteria("nope", GIBBSVS_TEST_TMP);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("oracle-checks") != std::string::npos);
  }
}

TEST_CASE("error json and result lines") {
  const auto j = nlohmann::json::parse(error_json("config", "bad \"key\"", 2));
  CHECK(j["error"] == "config");
  CHECK(j["message"] == "bad \"key\"");
  CHECK(j["exit_code"] == 2);
  CriterionResult r{"x", true, "fine", 1.25};
  CHECK(format_result(r).rfind("PASS | x | fine", 0) == 0);
  const auto arr = nlohmann::json::parse(results_json({r}));
  CHECK(arr.size() == 1);
  CHECK(arr[0]["passed"] == true);
}
