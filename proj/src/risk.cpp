#include "gibbsvs/risk.hpp"

#include <cmath>
#include <vector>

#include "gibbsvs/kernels.hpp"

namespace gibbsvs {

DecisionRule::DecisionRule(ModelIndicator ind, Coefficients c)
    : indicator(std::move(ind)), coefficients(std::move(c)) {
  check_shapes(indicator, coefficients);
}

DecisionRule DecisionRule::make(std::size_t k, int beta1, const std::vector<std::size_t>& active,
                                const std::vector<double>& values) {
  if (active.size() != values.size()) throw ConfigError("decision rule: index/value length mismatch");
  ModelIndicator ind = ModelIndicator::from_active(k, active);
  // Values are given in the caller's order; store them in ascending index order.
  Eigen::VectorXd coef(static_cast<Eigen::Index>(active.size()));
  const auto sorted = ind.active();
  for (std::size_t t = 0; t < sorted.size(); ++t)
    for (std::size_t u = 0; u < active.size(); ++u)
      if (active[u] == sorted[t]) coef[static_cast<Eigen::Index>(t)] = values[u];
  return DecisionRule(std::move(ind), Coefficients{beta1, std::move(coef)});
}

namespace {

Eigen::VectorXd scores(const Eigen::VectorXd& beta, const Dataset& data) {
  if (static_cast<std::size_t>(beta.size()) != data.k())
    throw ConfigError("risk: beta length does not match the dataset");
  return data.features() * beta;
}

// X beta touching only the rule's active columns.
Eigen::VectorXd scores(const DecisionRule& rule, const Dataset& data) {
  if (rule.indicator.k() != data.k()) throw ConfigError("risk: rule length does not match the dataset");
  const auto cols = rule.indicator.active();
  const auto& a = rule.coefficients.active;
  const std::vector<double> vals(a.data(), a.data() + a.size());
  Eigen::VectorXd m;
  kernels::omp::linear_predictor(data.features(), {static_cast<double>(rule.coefficients.beta1), cols, vals}, m);
  return m;
}

}  // namespace

double empirical_risk_unsmoothed(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec) {
  const Eigen::VectorXd m = scores(beta, data);
  return kernels::omp::loss_sum(m, data.labels(), spec) / static_cast<double>(data.n());
}

double empirical_risk_unsmoothed(const DecisionRule& rule, const Dataset& data, const RiskSpec& spec) {
  return kernels::omp::loss_sum(scores(rule, data), data.labels(), spec) / static_cast<double>(data.n());
}

double sample_risk_smoothed(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec) {
  const Eigen::VectorXd m = scores(beta, data);
  const double ll = kernels::omp::smoothed_log_likelihood(m, data.labels(), spec);
  return -ll / (static_cast<double>(data.n()) * spec.psi);
}

double sample_risk_smoothed(const DecisionRule& rule, const Dataset& data, const RiskSpec& spec) {
  const double ll = kernels::omp::smoothed_log_likelihood(scores(rule, data), data.labels(), spec);
  return -ll / (static_cast<double>(data.n()) * spec.psi);
}

double sample_risk_indicator(const Eigen::VectorXd& beta, const Dataset& data, const RiskSpec& spec) {
  const Eigen::VectorXd m = scores(beta, data);
  double s = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i)
    s += spec.log_a[static_cast<std::size_t>(decide(m[static_cast<Eigen::Index>(i)]))][static_cast<std::size_t>(data.label(i))];
  return -s / (static_cast<double>(data.n()) * spec.psi);
}

double indicator_risk_offset(const RiskSpec& spec, double label_mean) {
  // ln{A a1 + (1-A) a0} = psi q A (y - h) + y ln(p0/(1-p0)) + ln(1-p0), and
  // rho(y, A) = rho(0,0) + (rho(1,0) - rho(0,0)) y + q A (h - y).
  const double ln_p0 = spec.log_a[0][1];
  const double ln_1m_p0 = spec.log_a[0][0];
  const double gibbs_const = -(label_mean * (ln_p0 - ln_1m_p0) + ln_1m_p0) / spec.psi;
  const double loss_const = spec.rho[0][0] + (spec.rho[1][0] - spec.rho[0][0]) * label_mean;
  return gibbs_const - loss_const;
}

RiskEstimate population_risk_mc(const Eigen::VectorXd& beta, const GeneratorSpec& gen, std::size_t m,
                                std::uint64_t seed, const RiskSpec& spec) {
  if (m < 1) throw ConfigError("population risk: need at least one draw");
  if (gen.kind == GeneratorKind::file) throw ConfigError("population risk: file sources cannot be resampled");
  validate(gen);
  if (static_cast<std::size_t>(beta.size()) != gen.feature_count())
    throw ConfigError("population risk: beta length does not match the generator");

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (m + kChunk - 1) / kChunk;
  if (chunks >= (std::size_t{1} << 20)) throw ConfigError("population risk: too many draws");
  // Evaluation streams live in the upper half of the stream space, away from
  // the training (0) and holdout (1) streams.
  const std::uint64_t mix = (seed * 0x9E3779B97F4A7C15ull) >> 45;  // 19 bits
  const std::uint64_t base = (std::uint64_t{1} << 39) | (mix << 20);

  std::vector<double> sums(chunks, 0.0), squares(chunks, 0.0);
#pragma omp parallel for schedule(dynamic) if (chunks > 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const std::size_t rows = std::min(kChunk, m - cc * kChunk);
    const Dataset d = sample(gen, rows, base | cc);
    const Eigen::VectorXd score = d.features() * beta;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double l = spec.loss(d.label(i), decide(score[static_cast<Eigen::Index>(i)]));
      s += l;
      s2 += l * l;
    }
    sums[cc] = s;
    squares[cc] = s2;
  }
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += squares[c];
  }
  const double md = static_cast<double>(m);
  const double mean = s / md;
  const double var = m > 1 ? std::max(0.0, (s2 - md * mean * mean) / (md - 1.0)) : 0.0;
  return {mean, std::sqrt(var / md), m};
}

double population_risk_analytic(const Eigen::VectorXd& beta, const GeneratorSpec& gen, const RiskSpec& spec) {
  validate(gen);
  if (!gen.finite_support())
    throw ConfigError(std::string("population risk: generator '") + to_string(gen.kind) +
                      "' has no finite-support enumeration");
  if (static_cast<std::size_t>(beta.size()) != gen.feature_count())
    throw ConfigError("population risk: beta length does not match the generator");

  if (gen.kind == GeneratorKind::misspecified_logistic) {
    const double lam = gen.lambda;
    const std::array<std::pair<double, double>, 3> support{{{-1.0, lam}, {0.0, 1.0 - 2.0 * lam}, {1.0, lam}}};
    double r = 0.0;
    for (auto [x, p] : support) {
      const int y = x != 0.0 ? 1 : 0;
      r += p * spec.loss(y, decide(beta[0] * x + beta[1]));
    }
    return r;
  }
  // indicator grid: level k (z = k/K) switches on feature K - k; only k = K has y = 1.
  const std::size_t k = gen.k;
  double r = spec.loss(1, decide(beta[0]));
  for (std::size_t j = 1; j < k; ++j) r += spec.loss(0, decide(beta[static_cast<Eigen::Index>(j)]));
  return r / static_cast<double>(k);
}

double population_risk_analytic(const DecisionRule& rule, const GeneratorSpec& gen, const RiskSpec& spec) {
  return population_risk_analytic(rule.beta(), gen, spec);
}

const RiskSpec& classification_spec() {
  static const RiskSpec spec = derive_risk_spec(kClassificationLoss, 1.0, 1.0);
  return spec;
}

}  // namespace gibbsvs
