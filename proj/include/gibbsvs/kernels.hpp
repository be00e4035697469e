#pragma once

// Data-parallel inner loops.
//
// Every kernel exists twice: `serial::` is the plain reference loop and
// `omp::` splits the same loop across an OpenMP team. The split never changes
// the per-element arithmetic, and reductions are done by summing a per-element
// buffer in index order, so both variants return bit-identical results for
// any thread count. Library code calls the `omp::` variants; tests pin them
// against `serial::` and bench/ times the pair.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gibbsvs/core_types.hpp"

namespace gibbsvs::kernels {

/// Sparse view of an assembled beta: anchor sign plus selected columns.
struct SparseBeta {
  double anchor = 1.0;
  std::span<const std::size_t> columns;
  std::span<const double> values;
};

/// Latent-draw mechanism for the Z update.
enum class LatentMechanism { exact_mixture, rejection };

/// Inputs of a Z update pass.
struct LatentPass {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  LatentMechanism mechanism = LatentMechanism::exact_mixture;
};

/// Loops shorter than this stay on one thread.
inline constexpr std::size_t kParallelThreshold = 2048;

namespace serial {

/// m = X beta.
void linear_predictor(const Eigen::MatrixXd& x, const SparseBeta& beta, Eigen::VectorXd& m);

/// out_j = x_j^T z for every column j.
void cross_products(const Eigen::MatrixXd& x, const Eigen::VectorXd& z, Eigen::VectorXd& out);

/// Sum over i of ln{Phi(m_i/sigma) a1_i + (1 - Phi) a0_i}.
double smoothed_log_likelihood(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec);

/// Sum over i of rho(y_i, I[m_i > 0]).
double loss_sum(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec);

/// Fresh latent vector z given the linear predictor m.
void update_latent(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec,
                   const LatentPass& pass, Eigen::VectorXd& z);

}  // namespace serial

namespace omp {

void linear_predictor(const Eigen::MatrixXd& x, const SparseBeta& beta, Eigen::VectorXd& m);
void cross_products(const Eigen::MatrixXd& x, const Eigen::VectorXd& z, Eigen::VectorXd& out);
double smoothed_log_likelihood(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec);
double loss_sum(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec);
void update_latent(const Eigen::VectorXd& m, const Labels& y, const RiskSpec& spec,
                   const LatentPass& pass, Eigen::VectorXd& z);

}  // namespace omp

/// One smoothed-likelihood term ln{Phi(m/sigma) a1 + (1 - Phi) a0}.
double smoothed_log_term(double m, int y, const RiskSpec& spec);

/// Single-coordinate Z draw; shared by both kernel variants.
double draw_latent(double m, int y, const RiskSpec& spec, LatentMechanism mech,
                   std::uint64_t seed, std::uint64_t stream, std::uint32_t index);

/// Sets the OpenMP team size (<= 0 leaves the runtime default).
void set_threads(int n);
int max_threads();

}  // namespace gibbsvs::kernels
