#pragma once

// Config-driven experiment runs and their on-disk reports.
//
// Config files are INI:
//
//   seed = 1                       ; sampler seed (and generator seed unless set)
//   [generator]
//   kind = misspecified-logistic   ; indicator-grid | sparse-linear | file
//   n = 2000                       ; training rows
//   lambda = 0.125
//   k = 2
//   support = 3
//   coef_scale = 1
//   noise = 0
//   path = data.csv                ; file sources
//   label_column = y
//   anchor_column =
//   seed = 7
//   [risk]
//   rho = 0,1,1,0                  ; rho(0,0), rho(0,1), rho(1,0), rho(1,1)
//   psi = 1
//   sigma = auto                   ; auto = sqrt(ln n / n)
//   psi_grid =                     ; e.g. 0.25,0.5,1,2,4 (holdout selection)
//   [prior]
//   lambda = auto                  ; auto: lambda K = rbar / 2
//   rbar = auto                    ; auto: max(1, floor(M n delta^2 / (ln n)^2))
//   v = 1
//   delta = auto                   ; auto: n^{-1/2} (ln n)^2
//   eig_bound = 10
//   m_upper = 2
//   m_lower = 0.5
//   [sampler]
//   backend = gibbs                ; metropolis
//   iterations = 5000
//   burn_in = 1000
//   thin = 1
//   scan_order = systematic        ; random-permutation
//   z_update = exact-mixture       ; rejection
//   mh_step = 0.5
//   chains = 1
//   [evaluation]
//   analytic = auto                ; true | false | auto (when the source allows)
//   holdout = 0                    ; fresh rows for holdout risk
//   validation = 2000              ; rows for psi-grid selection
//   max_draws = 2000               ; retained draws used for risk estimates
//   baseline = false               ; also fit the logistic MLE

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/generators.hpp"
#include "gibbsvs/sampler.hpp"

namespace gibbsvs {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  GeneratorSpec generator;
  bool generator_seed_set = false;
  std::size_t n = 100;

  LossMatrix rho = kClassificationLoss;
  double psi = 1.0;
  std::optional<double> sigma;  // empty: sqrt(ln n / n)
  std::vector<double> psi_grid;

  std::optional<double> lambda;
  std::optional<std::size_t> rbar;
  double v = 1.0;
  std::optional<double> delta;
  double eig_bound = 10.0;
  SizeRule size_rule;

  SamplerConfig sampler;
  std::uint32_t chains = 1;

  std::optional<bool> analytic;  // empty: whenever the source has finite support
  std::size_t holdout = 0;
  std::size_t validation = 2000;
  std::size_t max_draws = 2000;
  bool baseline = false;

  /// Generator seed actually used.
  std::uint64_t data_seed() const { return generator_seed_set ? generator.seed : seed; }
};

/// Parses an INI config. Unknown sections or keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical key = value listing of the resolved config.
std::string config_echo(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical echo, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

const char* artifact_version();

/// Everything run_experiment produces, held in memory.
struct RunReport {
  std::string config_text;
  std::string conditions_json;
  std::vector<std::string> traces;  // one CSV per chain
  std::string summary_json;

  // Headline numbers, also present in the summary.
  double gibbs_risk = 0.0;       // posterior-mean risk of sampled rules
  bool gibbs_risk_analytic = false;
  std::optional<double> mle_risk;
  double posterior_mean_smoothed_risk = 0.0;
  double acceptance_rate = 0.0;
  double psi = 1.0;
  std::vector<double> inclusion;
};

/// Generates data, validates conditions (throws ConfigError on a blocking
/// failure), runs the sampler and evaluates the sampled rules.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes config.ini, conditions.json, trace.csv (trace_<c>.csv for more
/// chains) and summary.json into dir, creating it if needed.
void write_report(const RunReport& report, const std::string& dir);

/// {"error": kind, "message": ..., "exit_code": ...}.
std::string error_json(const std::string& kind, const std::string& message, int exit_code);

}  // namespace gibbsvs
