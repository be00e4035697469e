#pragma once

// Brute-force references for the sampler and the experiments.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/generators.hpp"
#include "gibbsvs/sampler.hpp"

namespace gibbsvs {

enum class RiskKind { smoothed, unsmoothed };

/// Coefficient grid: g equally spaced centers on [-G, G]. Cell k covers
/// [c_k - h/2, c_k + h/2] clipped to [-G, G], h = 2G/(g-1).
struct GridSpec {
  double half_width = 3.0;  // G
  std::size_t points = 21;  // g
  /// Each cell is split into this many equal sub-cells per axis and the
  /// likelihood is integrated over them. 1 evaluates at the cell center.
  std::size_t subdivisions = 1;

  double spacing() const { return 2.0 * half_width / static_cast<double>(points - 1); }
  double center(std::size_t k) const { return -half_width + spacing() * static_cast<double>(k); }
  /// Cell index of a coefficient value; values past +-G go to the edge cells.
  std::size_t cell_of(double b) const;
};

struct GridPoint {
  int beta1 = 1;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint32_t> cells;  // one per active coefficient
  double prob = 0.0;        // Gibbs posterior mass
  double prior_prob = 0.0;  // prior mass, normalized over the grid
  /// Cell risk R with exp(-n psi R) prior_prob proportional to prob.
  double risk = 0.0;
};

struct GridPosterior {
  GridSpec grid;
  RiskKind kind = RiskKind::smoothed;
  std::size_t n = 0;
  double psi = 1.0;
  std::vector<GridPoint> points;

  /// Index of the point whose cell contains the draw.
  std::size_t locate(int beta1, const ModelIndicator& indicator, const Eigen::VectorXd& active) const;
  std::size_t locate(const Draw& d) const { return locate(d.coefficients.beta1, d.indicator, d.coefficients.active); }
  std::size_t mode() const;

 private:
  friend GridPosterior exact_grid_posterior(const Dataset&, const RiskSpec&, const PriorSpec&, const GridSpec&,
                                            RiskKind);
  std::vector<std::vector<std::uint8_t>> models_;
  std::vector<std::size_t> offsets_;  // first point of (sign, model)
};

/// Discretized posterior exp(-n psi R_n) pi over the sign, every model within
/// the cap, and the coefficient grid. Guard: K <= 4, rbar <= 3, g <= 41.
GridPosterior exact_grid_posterior(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                                   const GridSpec& grid, RiskKind kind = RiskKind::smoothed);

/// Total variation between binned draws and the grid posterior.
double tv_distance(const GridPosterior& post, const std::vector<Draw>& draws);

/// Same, against the grid prior.
double tv_to_prior(const GridPosterior& post);

/// F(p) = sum_c p_c n R_c + psi^{-1} sum_c p_c ln(p_c / pi_c).
double variational_objective(const GridPosterior& post, const std::vector<double>& p);

struct VariationalResult {
  double f_gibbs = 0.0;
  double f_prior = 0.0;
  double min_f_trial = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;  // trials with F(gibbs) > F(trial) + tol
  bool ok() const { return violations == 0; }
};

/// Compares F at the Gibbs posterior against the grid prior and `trials`
/// Dirichlet perturbations of the posterior.
VariationalResult variational_check(const GridPosterior& post, std::size_t trials, std::uint64_t seed,
                                    double tol = 1e-9);

struct SparseSearch {
  std::size_t budget = 1;     // s, non-anchor coefficients
  double half_width = 1.0;    // coefficient grid [-G, G]
  std::size_t points = 21;    // g
  /// Non-anchor features to search over; empty means all of them.
  std::vector<std::size_t> candidates;
};

struct SparseRule {
  Eigen::VectorXd beta;
  double risk = 0.0;
  std::size_t evaluated = 0;
};

/// Exhaustive search over supports of size <= s, beta1 = +-1 and the
/// coefficient grid. Guard: C(K', s) g^s <= 1e7 with K' candidates.
/// Ties keep the first rule found (smaller supports first).
SparseRule best_sparse_rule(const std::function<double(const Eigen::VectorXd&)>& risk_of, std::size_t k,
                            const SparseSearch& search);
SparseRule best_sparse_rule(const Dataset& data, const RiskSpec& spec, const SparseSearch& search);
SparseRule best_sparse_rule(const GeneratorSpec& gen, const RiskSpec& spec, const SparseSearch& search);

struct LogisticFit {
  Eigen::VectorXd coefficients;
  bool converged = false;
  std::size_t iterations = 0;
};

/// IRLS for logit p(y=1|x) = x^T beta with ridge 1e-8 and at most 100
/// iterations. Non-convergence is flagged, not thrown. The classifier
/// I[p > 0.5] is the linear rule I[x^T beta > 0].
LogisticFit logistic_mle_baseline(const Dataset& data);

/// ln N(r; 0, sigma^2 I + v Xt Xt^T) for d = Xt.cols() <= 3, evaluated
/// through A = sigma^{-2} Xt^T Xt + v^{-1} I with a cofactor inverse and
/// determinant (no factorization).
double explicit_log_marginal(const Eigen::VectorXd& r, const Eigen::MatrixXd& xt, double sigma, double v);

struct NoSelectionResult {
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;  // 0.5 (1 - n/K)
  std::size_t draws = 0;
  bool ok() const { return estimate >= bound - 3.0 * se; }
};

/// Indicator-grid data with the observed coordinates held at the perfect
/// rule and every unobserved coordinate drawn from N(0, 1), never updated.
/// Reports the exact misclassification over a future point, averaged over
/// data and prior draws.
NoSelectionResult no_selection_experiment(std::size_t k, std::size_t n, std::uint64_t seed, std::size_t draws);

}  // namespace gibbsvs
