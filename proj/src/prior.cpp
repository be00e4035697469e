#include "gibbsvs/prior.hpp"

#include <cmath>
#include <limits>

#include "gibbsvs/normal.hpp"

namespace gibbsvs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// r ln a + s ln b with 0 ln 0 = 0.
double xlogy(double r, double y) {
  if (r == 0.0) return 0.0;
  return r * std::log(y);
}

double log_binomial_coef(std::size_t n, std::size_t r) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

std::vector<double> log_size_weights(const PriorSpec& prior) {
  const std::size_t m = prior.k - 1;
  const std::size_t top = std::min(prior.rbar - 1, m);
  std::vector<double> w(top + 1);
  for (std::size_t r = 0; r <= top; ++r)
    w[r] = log_binomial_coef(m, r) + xlogy(static_cast<double>(r), prior.lambda) +
           xlogy(static_cast<double>(m - r), 1.0 - prior.lambda);
  return w;
}

double log_sum_exp(const std::vector<double>& v) {
  double hi = kNegInf;
  for (double a : v) hi = std::max(hi, a);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double a : v) s += std::exp(a - hi);
  return hi + std::log(s);
}

}  // namespace

double log_bernoulli(double lambda, bool bit) {
  const double p = bit ? lambda : 1.0 - lambda;
  return p > 0.0 ? std::log(p) : kNegInf;
}

PriorDraw sample_prior(const PriorSpec& prior, Rng& rng) {
  const std::size_t k = prior.k;
  std::vector<std::uint8_t> bits(k, 0);
  bits[0] = 1;
  std::size_t tries = 0;
  for (;;) {
    std::size_t size = 1;
    for (std::size_t j = 1; j < k; ++j) {
      bits[j] = rng.bernoulli(prior.lambda) ? 1 : 0;
      size += bits[j];
    }
    if (size <= prior.rbar) break;
    if (++tries >= 1'000'000)
      throw NumericAbort("prior: 1e6 consecutive size-cap rejections (lambda*K far above rbar)");
  }
  ModelIndicator ind(std::move(bits));
  Coefficients c;
  c.beta1 = rng.bernoulli(0.5) ? 1 : -1;
  c.active.resize(static_cast<Eigen::Index>(ind.size() - 1));
  const double sd = std::sqrt(prior.v);
  for (Eigen::Index t = 0; t < c.active.size(); ++t) c.active[t] = sd * rng.normal();
  return {std::move(ind), std::move(c)};
}

double log_truncation_normalizer(const PriorSpec& prior) { return log_sum_exp(log_size_weights(prior)); }

std::vector<double> truncated_size_pmf(const PriorSpec& prior) {
  auto w = log_size_weights(prior);
  const double z = log_sum_exp(w);
  for (double& a : w) a = std::exp(a - z);
  return w;
}

double log_prior_model(const ModelIndicator& indicator, const PriorSpec& prior) {
  if (indicator.k() != prior.k) throw ConfigError("prior: indicator length does not match K");
  const std::size_t size = indicator.size();
  if (size > prior.rbar) return kNegInf;
  const double r = static_cast<double>(size - 1);
  const double rest = static_cast<double>(prior.k - size);
  if ((r > 0.0 && prior.lambda == 0.0) || (rest > 0.0 && prior.lambda == 1.0)) return kNegInf;
  return xlogy(r, prior.lambda) + xlogy(rest, 1.0 - prior.lambda) - log_truncation_normalizer(prior);
}

double log_prior_coefficients(const Coefficients& coeffs, const ModelIndicator& indicator,
                              const PriorSpec& prior) {
  check_shapes(indicator, coeffs);
  double s = std::log(0.5);
  for (Eigen::Index t = 0; t < coeffs.active.size(); ++t) s += log_normal_pdf(coeffs.active[t], 0.0, prior.v);
  return s;
}

}  // namespace gibbsvs
