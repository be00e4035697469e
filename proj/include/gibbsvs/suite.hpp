#pragma once

// Acceptance criteria with pinned seeds and tolerances. Each criterion is a
// self-contained experiment; suites group them.

#include <functional>
#include <string>
#include <vector>

namespace gibbsvs {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  std::string name;
  std::function<CriterionResult()> run;
};

// Pinned tolerances.
namespace tolerance {
inline constexpr double kMleRiskTarget = 0.25;
inline constexpr double kMleRiskBand = 0.02;
inline constexpr double kGibbsMisspecifiedMax = 0.15;
inline constexpr double kRescueRiskMax = 0.05;
inline constexpr double kStationarityTv = 0.05;
inline constexpr double kAugmentationRelErr = 1e-8;
inline constexpr double kVariationalSlack = 1e-9;
inline constexpr double kBranchWeightAbs = 1e-8;
inline constexpr double kRiskPerformanceGap = 0.05;
}  // namespace tolerance

CriterionResult misspecification_gap();
CriterionResult no_selection_rescue();
CriterionResult sampler_stationarity();
CriterionResult augmentation_identity();
CriterionResult variational_inequality();
CriterionResult step2b_conditionals();
CriterionResult sparse_family_inclusions();
CriterionResult risk_performance();
/// Writes two runs under work_dir and compares the files byte for byte.
CriterionResult determinism(const std::string& work_dir);
CriterionResult monotone_improvement();

std::vector<std::string> available_suites();

/// "paper-repro", "oracle-checks" or "all". Throws ConfigError for other
/// names, listing the valid ones.
std::vector<Criterion> suite_criteria(const std::string& name, const std::string& work_dir);

/// "PASS | name | detail | 1.2s"
std::string format_result(const CriterionResult& r);

/// JSON array of results.
std::string results_json(const std::vector<CriterionResult>& results);

}  // namespace gibbsvs
