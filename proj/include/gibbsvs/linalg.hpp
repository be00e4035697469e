#pragma once

// Cholesky kernels for S = (sigma^2 / v) I + Xt^T Xt, where Xt stacks the
// selected non-anchor columns.

#include <vector>

#include <Eigen/Dense>

#include "gibbsvs/core_types.hpp"

namespace gibbsvs {

/// Lower Cholesky factor of a d x d SPD matrix with its log-determinant.
/// d = 0 is legal: every solve returns an empty vector and log_det is 0.
class SpdFactor {
 public:
  /// Factorizes s. On failure adds 1e-10 * trace/d to the diagonal and tries
  /// once more; throws NumericAbort if that fails or s has non-finite entries.
  static SpdFactor factorize(const Eigen::MatrixXd& s);

  Eigen::Index dim() const { return lower_.rows(); }
  const Eigen::MatrixXd& lower() const { return lower_; }
  double log_det() const { return log_det_; }
  bool jittered() const { return jittered_; }

  /// S^{-1} rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// L^{-1} rhs.
  Eigen::VectorXd solve_lower(const Eigen::VectorXd& rhs) const;
  /// L^{-T} rhs.
  Eigen::VectorXd solve_lower_transpose(const Eigen::VectorXd& rhs) const;
  /// rhs^T S^{-1} rhs = |L^{-1} rhs|^2.
  double quadratic_form(const Eigen::VectorXd& rhs) const;
  /// L L^T.
  Eigen::MatrixXd reconstruct() const { return lower_ * lower_.transpose(); }

 private:
  Eigen::MatrixXd lower_;
  double log_det_ = 0.0;
  bool jittered_ = false;
};

/// Columns of the selected non-anchor features, in ascending index order.
Eigen::MatrixXd selected_columns(const Dataset& data, const std::vector<std::size_t>& columns);

/// (sigma^2/v) I + gram.
Eigen::MatrixXd sgamma_matrix(const Eigen::MatrixXd& gram, double sigma, double v);

/// Factor of S_gamma for the indicator's active set.
SpdFactor build_sgamma(const Dataset& data, const ModelIndicator& indicator, double sigma, double v);

Eigen::VectorXd spd_solve(const SpdFactor& factor, const Eigen::VectorXd& rhs);

/// -0.5 ln det[I + sigma^{-2} v Xt^T Xt] = -0.5 [ln det S + d ln(v / sigma^2)].
double log_det_ratio_term(const SpdFactor& factor, double sigma, double v);

}  // namespace gibbsvs
