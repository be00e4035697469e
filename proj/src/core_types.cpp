#include "gibbsvs/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace gibbsvs {

Dataset::Dataset(Labels labels, Eigen::MatrixXd features, std::string provenance,
                 bool condition_0pp_declared)
    : labels_(std::move(labels)),
      features_(std::move(features)),
      provenance_(std::move(provenance)),
      condition_0pp_declared_(condition_0pp_declared) {
  if (labels_.empty()) throw ConfigError("dataset: n must be at least 1");
  if (features_.cols() < 1) throw ConfigError("dataset: K must be at least 1");
  if (static_cast<std::size_t>(features_.rows()) != labels_.size())
    throw ConfigError("dataset: label count does not match feature rows");
  for (auto y : labels_)
    if (y > 1) throw ConfigError("dataset: labels must be 0 or 1");
  if (!features_.allFinite()) throw ConfigError("dataset: non-finite feature entry");
}

bool Dataset::features_bounded() const {
  return features_.size() == 0 || features_.cwiseAbs().maxCoeff() <= 1.0;
}

double Dataset::label_mean() const {
  double s = 0.0;
  for (auto y : labels_) s += y;
  return s / static_cast<double>(labels_.size());
}

ModelIndicator::ModelIndicator(std::size_t k) : bits_(k, 0) {
  if (k < 1) throw ConfigError("model indicator: K must be at least 1");
  bits_[0] = 1;
}

ModelIndicator::ModelIndicator(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw ConfigError("model indicator: K must be at least 1");
  if (bits_[0] != 1) throw ConfigError("model indicator: anchor bit must be set");
  size_ = 0;
  for (auto& b : bits_) {
    if (b > 1) throw ConfigError("model indicator: bits must be 0 or 1");
    size_ += b;
  }
}

ModelIndicator ModelIndicator::from_active(std::size_t k, const std::vector<std::size_t>& active) {
  ModelIndicator out(k);
  for (auto j : active) {
    if (j == 0 || j >= k) throw ConfigError("model indicator: active index out of range");
    out.set(j, true);
  }
  return out;
}

void ModelIndicator::set(std::size_t j, bool on) {
  if (j == 0) throw ConfigError("model indicator: the anchor cannot be toggled");
  if (j >= bits_.size()) throw ConfigError("model indicator: index out of range");
  const std::uint8_t nv = on ? 1 : 0;
  if (bits_[j] == nv) return;
  bits_[j] = nv;
  if (on) ++size_;
  else --size_;
}

std::vector<std::size_t> ModelIndicator::active() const {
  std::vector<std::size_t> out;
  out.reserve(size_ - 1);
  for (std::size_t j = 1; j < bits_.size(); ++j)
    if (bits_[j]) out.push_back(j);
  return out;
}

void check_shapes(const ModelIndicator& indicator, const Coefficients& coeffs) {
  if (coeffs.beta1 != 1 && coeffs.beta1 != -1)
    throw ConfigError("coefficients: beta1 must be +1 or -1");
  if (static_cast<std::size_t>(coeffs.active.size()) + 1 != indicator.size())
    throw ConfigError("coefficients: active length does not match the model indicator");
}

Eigen::VectorXd assemble_beta(const ModelIndicator& indicator, const Coefficients& coeffs) {
  check_shapes(indicator, coeffs);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(indicator.k()));
  beta[0] = coeffs.beta1;
  Eigen::Index t = 0;
  for (std::size_t j = 1; j < indicator.k(); ++j)
    if (indicator.test(j)) beta[static_cast<Eigen::Index>(j)] = coeffs.active[t++];
  return beta;
}

double RiskSpec::term_bound() const {
  const double lo = std::min({p0, p1, 1.0 - p0, 1.0 - p1});
  return std::log(1.0 / lo) / psi;
}

RiskSpec derive_risk_spec(const LossMatrix& rho, double psi, double sigma_n) {
  for (const auto& row : rho)
    for (double r : row)
      if (!std::isfinite(r)) throw ConfigError("risk: loss matrix entries must be finite");
  if (!(rho[0][1] > rho[0][0]))
    throw ConfigError("risk: need rho(0,1) > rho(0,0)");
  if (!(rho[1][0] > rho[1][1]))
    throw ConfigError("risk: need rho(1,0) > rho(1,1)");
  if (!(psi > 0.0) || !std::isfinite(psi)) throw ConfigError("risk: psi must be positive");
  if (!(sigma_n > 0.0) || !std::isfinite(sigma_n))
    throw ConfigError("risk: sigma_n must be positive");

  RiskSpec s;
  s.rho = rho;
  s.psi = psi;
  s.sigma_n = sigma_n;
  s.q = rho[1][0] + rho[0][1] - rho[1][1] - rho[0][0];
  s.h = (rho[0][1] - rho[0][0]) / s.q;

  // With D = 1 - e^{-psi q}, A = 1 - e^{-psi h q}, B = 1 - e^{-psi q (1-h)}:
  //   p1 = A/D, 1-p0 = B/D, p0 = e^{-psi q (1-h)} A/D, 1-p1 = e^{-psi h q} B/D.
  const double pq = psi * s.q;
  const double log_d = std::log(-std::expm1(-pq));
  const double log_a = std::log(-std::expm1(-pq * s.h));
  const double log_b = std::log(-std::expm1(-pq * (1.0 - s.h)));
  const double ln_p1 = log_a - log_d;
  const double ln_1m_p0 = log_b - log_d;
  const double ln_p0 = -pq * (1.0 - s.h) + log_a - log_d;
  const double ln_1m_p1 = -pq * s.h + log_b - log_d;
  s.p0 = std::exp(ln_p0);
  s.p1 = std::exp(ln_p1);
  s.log_a[0][0] = ln_1m_p0;
  s.log_a[0][1] = ln_p0;
  s.log_a[1][0] = ln_1m_p1;
  s.log_a[1][1] = ln_p1;

  // p1 may round to 1 for large psi q; the log weights carry the precision.
  const bool finite = std::isfinite(ln_p0) && std::isfinite(ln_p1) && std::isfinite(ln_1m_p0) &&
                      std::isfinite(ln_1m_p1);
  if (!(finite && ln_p0 < 0.0 && ln_1m_p1 < 0.0 && ln_p0 < ln_p1))
    throw NumericAbort("risk: derived mixture probabilities out of range");
  return s;
}

PriorSpec make_prior_spec(double lambda, std::size_t rbar, double v, std::size_t k,
                          double eig_bound) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("prior: lambda must lie in [0, 1]");
  if (k < 1) throw ConfigError("prior: K must be at least 1");
  if (rbar < 1 || rbar > k) throw ConfigError("prior: need 1 <= rbar <= K");
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("prior: v must be positive");
  if (!(eig_bound > 0.0)) throw ConfigError("prior: eigenvalue bound must be positive");
  if (std::max(v, 1.0 / v) > eig_bound)
    throw ConfigError("prior: max(v, 1/v) exceeds the eigenvalue bound");
  return PriorSpec{lambda, rbar, v, k, eig_bound};
}

double default_delta(std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  return ln * ln / std::sqrt(static_cast<double>(n));
}

double sparsity_budget(std::size_t n, double delta) {
  const double ln = std::log(static_cast<double>(n));
  return static_cast<double>(n) * delta * delta / (ln * ln);
}

PriorSpec auto_prior_spec(std::size_t n, std::size_t k, double v, double delta,
                          const SizeRule& rule, double eig_bound) {
  if (n < 2) throw ConfigError("prior: automatic size rule needs n >= 2");
  const double target = std::floor(rule.m_upper * sparsity_budget(n, delta));
  std::size_t rbar = target < 1.0 ? 1 : static_cast<std::size_t>(target);
  rbar = std::min(rbar, k);
  const double lambda = std::min(1.0, 0.5 * static_cast<double>(rbar) / static_cast<double>(k));
  return make_prior_spec(lambda, rbar, v, k, eig_bound);
}

double default_sigma(std::size_t n) {
  return std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
}

const char* to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::pass: return "pass";
    case ConditionStatus::warn: return "warn";
    case ConditionStatus::fail: return "fail";
  }
  return "?";
}

bool ConditionReport::blocking() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const ConditionEntry& e) { return e.status == ConditionStatus::fail; });
}

const ConditionEntry* ConditionReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string ConditionReport::to_json() const {
  nlohmann::ordered_json j;
  j["delta_n"] = delta_n;
  j["conditions"] = nlohmann::ordered_json::array();
  for (const auto& e : entries)
    j["conditions"].push_back({{"name", e.name}, {"status", to_string(e.status)}, {"message", e.message}});
  return j.dump(2);
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

ConditionReport validate_conditions(const Dataset& data, const PriorSpec& prior,
                                    const RiskSpec& risk, double delta_n,
                                    const SizeRule& rule) {
  ConditionReport rep;
  rep.delta_n = delta_n;
  auto add = [&](std::string name, ConditionStatus st, std::string msg) {
    rep.entries.push_back({std::move(name), st, std::move(msg)});
  };

  const double n = static_cast<double>(data.n());
  const double k = static_cast<double>(data.k());
  const double ln = std::log(n);
  const bool have_log = data.n() >= 2;

  if (data.features_bounded()) add("0'", ConditionStatus::pass, "all features in [-1, 1]");
  else
    add("0'", ConditionStatus::fail,
        "feature entry with |x| > 1 (max " + fmt(data.features().cwiseAbs().maxCoeff()) + ")");

  if (data.condition_0pp_declared())
    add("0''", ConditionStatus::pass, "bounded anchor density declared by the data source");
  else
    add("0''", ConditionStatus::warn, "bounded anchor density not declared; not checkable from data");

  if (!have_log) {
    add("1'", ConditionStatus::warn, "undefined for n < 2");
  } else {
    const double lo = ln / std::sqrt(n);
    const bool ok = lo < delta_n && delta_n < 1.0;
    add("1'", ok ? ConditionStatus::pass : ConditionStatus::warn,
        "need " + fmt(lo) + " < delta_n = " + fmt(delta_n) + " < 1");
  }

  add("3'", n < k ? ConditionStatus::pass : ConditionStatus::warn,
      "n = " + fmt(n) + ", K = " + fmt(k) + (n < k ? "" : " (not high-dimensional)"));

  if (!have_log) {
    add("sigma", ConditionStatus::warn, "undefined for n < 2");
  } else {
    const double need = std::sqrt(n / ln);
    const double inv = 1.0 / risk.sigma_n;
    const bool ok = inv >= need * (1.0 - 1e-12);
    add("sigma", ok ? ConditionStatus::pass : ConditionStatus::warn,
        "need 1/sigma_n = " + fmt(inv) + " >= (n/ln n)^{1/2} = " + fmt(need));
  }

  const double eig = std::max(prior.v, 1.0 / prior.v);
  add("V", eig <= prior.eig_bound ? ConditionStatus::pass : ConditionStatus::fail,
      "max(v, 1/v) = " + fmt(eig) + ", bound " + fmt(prior.eig_bound));

  if (prior.k != data.k())
    add("prior", ConditionStatus::fail, "prior K does not match the dataset");
  else if (prior.rbar < 1 || prior.rbar > prior.k || prior.lambda < 0.0 || prior.lambda > 1.0)
    add("prior", ConditionStatus::fail, "invalid prior specification");
  else
    add("prior", ConditionStatus::pass, "rbar = " + std::to_string(prior.rbar));

  if (!have_log) {
    add("r_delta", ConditionStatus::warn, "undefined for n < 2");
  } else {
    const double budget = sparsity_budget(data.n(), delta_n);
    const double lk = prior.lambda * k;
    const double target = std::max(1.0, std::floor(rule.m_upper * budget));
    const bool ok = rule.m_lower * budget <= lk && lk <= static_cast<double>(prior.rbar) &&
                    static_cast<double>(prior.rbar) == std::min(target, k);
    add("r_delta", ok ? ConditionStatus::pass : ConditionStatus::warn,
        "need " + fmt(rule.m_lower * budget) + " <= lambda K = " + fmt(lk) + " <= rbar = " +
            std::to_string(prior.rbar) + " (target " + fmt(target) + ")");
  }
  return rep;
}

}  // namespace gibbsvs
