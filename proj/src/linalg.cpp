#include "gibbsvs/linalg.hpp"

#include <cmath>

namespace gibbsvs {

namespace {

bool try_llt(const Eigen::MatrixXd& s, Eigen::MatrixXd& lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  // LLT only checks pivot signs; a NaN slipping through is also a failure.
  return lower.allFinite() && (lower.diagonal().array() > 0.0).all();
}

}  // namespace

SpdFactor SpdFactor::factorize(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw ConfigError("spd factor: matrix is not square");
  if (!s.allFinite()) throw NumericAbort("spd factor: non-finite entries");
  SpdFactor f;
  const Eigen::Index d = s.rows();
  if (d == 0) return f;
  if (!try_llt(s, f.lower_)) {
    Eigen::MatrixXd j = s;
    j.diagonal().array() += 1e-10 * s.trace() / static_cast<double>(d);
    if (!try_llt(j, f.lower_)) throw NumericAbort("spd factor: matrix not positive definite after jitter");
    f.jittered_ = true;
  }
  f.log_det_ = 2.0 * f.lower_.diagonal().array().log().sum();
  return f;
}

Eigen::VectorXd SpdFactor::solve_lower(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim()) throw ConfigError("spd solve: dimension mismatch");
  if (dim() == 0) return {};
  return lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::VectorXd SpdFactor::solve_lower_transpose(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim()) throw ConfigError("spd solve: dimension mismatch");
  if (dim() == 0) return {};
  return lower_.transpose().triangularView<Eigen::Upper>().solve(rhs);
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const { return solve_lower_transpose(solve_lower(rhs)); }

double SpdFactor::quadratic_form(const Eigen::VectorXd& rhs) const {
  if (dim() == 0) {
    if (rhs.size() != 0) throw ConfigError("spd solve: dimension mismatch");
    return 0.0;
  }
  return solve_lower(rhs).squaredNorm();
}

Eigen::MatrixXd selected_columns(const Dataset& data, const std::vector<std::size_t>& columns) {
  Eigen::MatrixXd xt(static_cast<Eigen::Index>(data.n()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t t = 0; t < columns.size(); ++t) xt.col(static_cast<Eigen::Index>(t)) = data.column(columns[t]);
  return xt;
}

Eigen::MatrixXd sgamma_matrix(const Eigen::MatrixXd& gram, double sigma, double v) {
  if (!(sigma > 0.0) || !(v > 0.0)) throw ConfigError("sgamma: sigma and v must be positive");
  Eigen::MatrixXd s = gram;
  s.diagonal().array() += sigma * sigma / v;
  return s;
}

SpdFactor build_sgamma(const Dataset& data, const ModelIndicator& indicator, double sigma, double v) {
  if (indicator.k() != data.k()) throw ConfigError("sgamma: indicator length does not match the dataset");
  const Eigen::MatrixXd xt = selected_columns(data, indicator.active());
  const Eigen::MatrixXd gram = xt.transpose() * xt;
  return SpdFactor::factorize(sgamma_matrix(gram, sigma, v));
}

Eigen::VectorXd spd_solve(const SpdFactor& factor, const Eigen::VectorXd& rhs) { return factor.solve(rhs); }

double log_det_ratio_term(const SpdFactor& factor, double sigma, double v) {
  const auto d = static_cast<double>(factor.dim());
  return -0.5 * (factor.log_det() + d * std::log(v / (sigma * sigma)));
}

}  // namespace gibbsvs
