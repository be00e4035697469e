#pragma once

// Risk functionals for linear decision rules A(x) = I[x^T beta > 0].

#include <cstdint>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/generators.hpp"

namespace gibbsvs {

/// A standardized rule: model indicator plus (beta1, active coefficients).
struct DecisionRule {
  ModelIndicator indicator;
  Coefficients coefficients;

  DecisionRule(ModelIndicator ind, Coefficients c);
  /// Rule with the given active set and coefficients.
  static DecisionRule make(std::size_t k, int beta1, const std::vector<std::size_t>& active,
                           const std::vector<double>& values);

  Eigen::VectorXd beta() const { return assemble_beta(indicator, coefficients); }
};

/// I[x^T beta > 0], strict at the boundary.
inline int decide(double score) { return score > 0.0 ? 1 : 0; }

/// n^{-1} sum_i rho(y_i, A(x_i)).
double empirical_risk_unsmoothed(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec);
double empirical_risk_unsmoothed(const DecisionRule& rule, const Dataset& data, const RiskSpec& spec);

/// Smoothed sample risk
///   R_n = -(n psi)^{-1} sum_i ln{Phi_i a1_i + (1 - Phi_i) a0_i},
/// Phi_i = Phi(x_i^T beta / sigma_n). Lies in [0, spec.term_bound()].
double sample_risk_smoothed(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec);
double sample_risk_smoothed(const DecisionRule& rule, const Dataset& data, const RiskSpec& spec);

/// Same construction with the indicator A_i in place of Phi_i.
double sample_risk_indicator(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec);

/// Constant c with sample_risk_indicator = empirical_risk_unsmoothed + c on
/// any dataset whose mean label is `label_mean`. Both risks equal
/// q n^{-1} sum A_i (h - y_i) plus a rule-free constant.
double indicator_risk_offset(const RiskSpec& spec, double label_mean);

struct RiskEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t draws = 0;
};

/// Monte Carlo estimate of E rho(y, A) over fresh draws from the generator.
/// Draws are produced in fixed-size chunks, each with its own counter-based
/// stream, so the result depends on (seed, m) only.
RiskEstimate population_risk_mc(const Eigen::VectorXd& beta, const GeneratorSpec& gen, std::size_t m,
                                std::uint64_t seed, const RiskSpec& spec);

/// Exact E rho(y, A) by enumerating a finite-support generator.
double population_risk_analytic(const Eigen::VectorXd& beta, const GeneratorSpec& gen, const RiskSpec& spec);
double population_risk_analytic(const DecisionRule& rule, const GeneratorSpec& gen, const RiskSpec& spec);

/// Classification spec used when only the loss matrix matters.
const RiskSpec& classification_spec();

}  // namespace gibbsvs
