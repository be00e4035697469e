#include "gibbsvs/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "gibbsvs/normal.hpp"

namespace gibbsvs::kernels {

double smoothed_log_term(double m, int y, const RiskSpec& spec) {
  const double t = m / spec.sigma_n;
  const double pos = spec.log_a[1][static_cast<std::size_t>(y)] + log_norm_cdf(t);
  const double neg = spec.log_a[0][static_cast<std::size_t>(y)] + log_norm_cdf(-t);
  const double hi = std::max(pos, neg);
  return hi + std::log1p(std::exp(std::min(pos, neg) - hi));
}

double draw_latent(double m, int y, const RiskSpec& spec, LatentMechanism mech,
                   std::uint64_t seed, std::uint64_t stream, std::uint32_t index) {
  Rng rng(seed, stream, index);
  const double sd = spec.sigma_n;
  const double la1 = spec.log_a[1][static_cast<std::size_t>(y)];
  const double la0 = spec.log_a[0][static_cast<std::size_t>(y)];

  if (mech == LatentMechanism::exact_mixture) {
    const double t = m / sd;
    const double lp = la1 + log_norm_cdf(t);
    const double ln = la0 + log_norm_cdf(-t);
    const double w_pos = 1.0 / (1.0 + std::exp(ln - lp));
    if (rng.uniform() < w_pos) {
      const double z = truncated_normal_above(rng, m, sd, 0.0);
      return z > 0.0 ? z : std::numeric_limits<double>::denorm_min();
    }
    return std::min(truncated_normal_below(rng, m, sd, 0.0), 0.0);
  }

  // Propose from N(m, sd^2); keep with probability a_side / max(a1, a0).
  const double top = std::max(la1, la0);
  const double acc_pos = std::exp(la1 - top);
  const double acc_neg = std::exp(la0 - top);
  for (int t = 0; t < 1'000'000; ++t) {
    const double z = m + sd * rng.normal();
    const double u = rng.uniform();
    if (z > 0.0 ? u <= acc_pos : u <= acc_neg) return z;
  }
  throw NumericAbort("latent update: rejection exceeded 1e6 retries");
}

namespace {

inline void axpy_rows(const Eigen::MatrixXd& x, const SparseBeta& beta, Eigen::VectorXd& m,
                      Eigen::Index lo, Eigen::Index hi) {
  const Eigen::Index len = hi - lo;
  m.segment(lo, len) = beta.anchor * x.col(0).segment(lo, len);
  for (std::size_t t = 0; t < beta.columns.size(); ++t)
    m.segment(lo, len) += beta.values[t] * x.col(static_cast<Eigen::Index>(beta.columns[t])).segment(lo, len);
}

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s;
}

}  // namespace

namespace serial {

void linear_predictor(const Eigen::MatrixXd& x, const SparseBeta& beta, Eigen::VectorXd& m) {
  m.resize(x.rows());
  axpy_rows(x, beta, m, 0, x.rows());
}

void cross_products(const Eigen::MatrixXd& x, const Eigen::VectorXd& z, Eigen::VectorXd& out) {
  out.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out[j] = x.col(j).dot(z);
}

double smoothed_log_likelihood(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec) {
  std::vector<double> terms(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    terms[i] = smoothed_log_term(m[static_cast<Eigen::Index>(i)], y[i], spec);
  return ordered_sum(terms);
}

double loss_sum(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec) {
  std::vector<double> terms(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    terms[i] = spec.loss(y[i], m[static_cast<Eigen::Index>(i)] > 0.0 ? 1 : 0);
  return ordered_sum(terms);
}

void update_latent(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec,
                   const LatentPass& pass, Eigen::VectorXd& z) {
  z.resize(m.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    z[static_cast<Eigen::Index>(i)] =
        draw_latent(m[static_cast<Eigen::Index>(i)], y[i], spec, pass.mechanism, pass.seed,
                    pass.stream, static_cast<std::uint32_t>(i));
}

}  // namespace serial

namespace omp {

void linear_predictor(const Eigen::MatrixXd& x, const SparseBeta& beta, Eigen::VectorXd& m) {
  const Eigen::Index n = x.rows();
  m.resize(n);
  if (static_cast<std::size_t>(n) < kParallelThreshold) {
    axpy_rows(x, beta, m, 0, n);
    return;
  }
  constexpr Eigen::Index kBlock = 1024;
  const Eigen::Index blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b)
    axpy_rows(x, beta, m, b * kBlock, std::min(n, (b + 1) * kBlock));
}

void cross_products(const Eigen::MatrixXd& x, const Eigen::VectorXd& z, Eigen::VectorXd& out) {
  const Eigen::Index k = x.cols();
  out.resize(k);
  const bool par = static_cast<std::size_t>(k * x.rows()) >= 16 * kParallelThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index j = 0; j < k; ++j) out[j] = x.col(j).dot(z);
}

double smoothed_log_likelihood(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  std::vector<double> terms(y.size());
#pragma omp parallel for schedule(static) if (y.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    terms[static_cast<std::size_t>(i)] = smoothed_log_term(m[i], y[static_cast<std::size_t>(i)], spec);
  return ordered_sum(terms);
}

double loss_sum(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  std::vector<double> terms(y.size());
#pragma omp parallel for schedule(static) if (y.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    terms[static_cast<std::size_t>(i)] = spec.loss(y[static_cast<std::size_t>(i)], m[i] > 0.0 ? 1 : 0);
  return ordered_sum(terms);
}

void update_latent(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec,
                   const LatentPass& pass, Eigen::VectorXd& z) {
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  z.resize(m.size());
  // Rejection can throw; capture and rethrow outside the team.
  bool failed = false;
#pragma omp parallel for schedule(static) if (y.size() >= kParallelThreshold / 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      z[i] = draw_latent(m[i], y[static_cast<std::size_t>(i)], spec, pass.mechanism, pass.seed,
                         pass.stream, static_cast<std::uint32_t>(i));
    } catch (const NumericAbort&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw NumericAbort("latent update: rejection exceeded 1e6 retries");
}

}  // namespace omp

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace gibbsvs::kernels
