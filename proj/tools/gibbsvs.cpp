// Command-line entry point: config-driven runs and acceptance suites.
//
//   gibbsvs --config run.ini --out out/run1 [--seed 3] [--threads 4]
//   gibbsvs --suite oracle-checks --out out/suite
//
// Exit codes: 0 success, 2 config error, 3 criterion failure, 4 numeric abort.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/experiment.hpp"
#include "gibbsvs/kernels.hpp"
#include "gibbsvs/suite.hpp"

namespace fs = std::filesystem;
using namespace gibbsvs;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCriterion = 3;
constexpr int kExitNumeric = 4;

int fail(const std::string& out_dir, const std::string& kind, const std::string& message, int code) {
  const std::string body = error_json(kind, message, code);
  std::cerr << body;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream(fs::path(out_dir) / "error.json", std::ios::binary) << body;
  }
  return code;
}

int run_suite(const std::string& name, const std::string& out_dir) {
  const auto criteria = suite_criteria(name, out_dir.empty() ? "." : out_dir);
  std::vector<CriterionResult> results;
  bool all = true;
  for (const auto& c : criteria) {
    results.push_back(c.run());
    all = all && results.back().passed;
    std::cout << format_result(results.back()) << std::endl;
  }
  std::cout << (all ? "suite " + name + ": all passed" : "suite " + name + ": FAILED") << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "suite_report.json", std::ios::binary) << results_json(results);
  }
  return all ? 0 : kExitCriterion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-posterior variable selection for linear classification"};
  std::string config_path, out_dir, suite;
  std::uint64_t seed = 0;
  int threads = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--config", config_path, "INI experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--suite", suite, "Acceptance suite: paper-repro, oracle-checks or all");
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", artifact_version());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (threads > 0) kernels::set_threads(threads);

  try {
    if (!suite.empty()) return run_suite(suite, out_dir);
    if (config_path.empty()) return fail(out_dir, "config", "either --config or --suite is required", kExitConfig);
    if (out_dir.empty()) return fail(out_dir, "config", "--out is required with --config", kExitConfig);
    ExperimentConfig config = load_config(config_path);
    if (*seed_opt) {
      config.seed = seed;
    }
    const RunReport report = run_experiment(config);
    write_report(report, out_dir);
    std::cout << report.summary_json;
    return 0;
  } catch (const ConfigError& e) {
    return fail(out_dir, "config", e.what(), kExitConfig);
  } catch (const NumericAbort& e) {
    return fail(out_dir, "numeric", e.what(), kExitNumeric);
  } catch (const std::exception& e) {
    return fail(out_dir, "internal", e.what(), kExitNumeric);
  }
}
