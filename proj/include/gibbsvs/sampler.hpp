#pragma once

// Data-augmentation Gibbs sampler for the posterior
//   omega(d beta | D) ∝ exp(-n psi R_n(beta)) pi(d beta)
// with the smoothed risk, plus a Metropolis backend on the unsmoothed risk.
//
// Augmented model: Z_i ~ N(x_i^T beta, sigma^2), y_i | Z_i ~ Bin(1, p_{I[Z_i>0]}).
// Integrating Z_i out gives back the smoothed risk term for observation i.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/kernels.hpp"
#include "gibbsvs/rng.hpp"

namespace gibbsvs {

struct SamplerState {
  Eigen::VectorXd z;
  ModelIndicator indicator;
  Coefficients coefficients;
  std::uint64_t iteration = 0;

  explicit SamplerState(std::size_t k) : indicator(k) {}
  SamplerState(Eigen::VectorXd z_, ModelIndicator ind, Coefficients c)
      : z(std::move(z_)), indicator(std::move(ind)), coefficients(std::move(c)) {}

  Eigen::VectorXd beta() const { return assemble_beta(indicator, coefficients); }
};

enum class ScanOrder { systematic, random_permutation };
enum class Backend { gibbs, metropolis };

const char* to_string(ScanOrder s);
const char* to_string(Backend b);
const char* to_string(kernels::LatentMechanism m);
ScanOrder parse_scan_order(const std::string& s);
Backend parse_backend(const std::string& s);
kernels::LatentMechanism parse_latent_mechanism(const std::string& s);

struct SamplerConfig {
  std::uint64_t iterations = 1000;
  std::uint64_t burn_in = 200;
  std::uint64_t thin = 1;
  ScanOrder scan_order = ScanOrder::systematic;
  kernels::LatentMechanism z_update = kernels::LatentMechanism::exact_mixture;
  std::uint64_t seed = 0;
  Backend backend = Backend::gibbs;
  /// Random-walk step for the Metropolis coefficient perturbation.
  double mh_step = 0.5;
  std::uint32_t chain = 0;

  /// Throws ConfigError unless burn_in < iterations and thin >= 1.
  void validate() const;
};

struct Draw {
  ModelIndicator indicator;
  Coefficients coefficients;
};

struct ChainOutput {
  SamplerConfig config;
  std::vector<Draw> draws;
  // One entry per iteration (burn-in included).
  std::vector<std::uint32_t> model_size;
  std::vector<double> risk_smoothed;
  std::vector<int> beta1;
  std::vector<std::uint32_t> accepted_moves;
  std::vector<std::uint32_t> proposed_moves;

  double acceptance_rate() const;
  /// Fraction of retained draws with gamma_j = 1, j = 0..K-1.
  std::vector<double> inclusion_frequencies() const;
  /// Mean of R_n over retained iterations.
  double posterior_mean_smoothed_risk() const;
};

/// sum_i [ln N(Z_i; x_i^T beta, sigma^2) + ln a_{s_i}(y_i)] + log prior.
double augmented_log_joint(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                           const PriorSpec& prior);

/// Step 1: fresh Z from its full conditional.
Eigen::VectorXd step1_update_z(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                               kernels::LatentMechanism mech, std::uint64_t seed, std::uint64_t stream);

/// Unnormalized ln p(beta1 | Z, gamma) with beta-tilde integrated out:
///   ln 0.5 + 0.5 sigma^{-2} Z(b)^T [Xt S^{-1} Xt^T - I] Z(b).
double sign_log_weight(const Eigen::VectorXd& z, const Dataset& data, const ModelIndicator& indicator,
                       int beta1, double sigma, double v);

/// Step 2a.
int step2a_update_sign(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                       const PriorSpec& prior, Rng& rng);

/// Unnormalized ln p(gamma_j = 0) and ln p(gamma_j = 1) given everything
/// else, with the branch-common -0.5 sigma^{-2} |Z(beta1)|^2 dropped. A
/// branch above the size cap gets -inf.
std::pair<double, double> indicator_branch_log_weights(const SamplerState& state, const Dataset& data,
                                                       const RiskSpec& risk, const PriorSpec& prior,
                                                       std::size_t j);

/// Step 2b: one pass over j = 2..K in the given order (0-based feature
/// indices 1..K-1). Returns the new indicator; also reports flips.
ModelIndicator step2b_update_indicator(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                                       const PriorSpec& prior, Rng& rng, const std::vector<std::size_t>& order,
                                       std::uint32_t* flips = nullptr);

/// Mean and lower Cholesky factor L of the Step 3 conditional; the
/// covariance is sigma^2 (L L^T)^{-1}.
struct CoefficientConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd lower;
  double sigma = 0.0;

  double log_density(const Eigen::VectorXd& x) const;
};

CoefficientConditional coefficient_conditional(const SamplerState& state, const Dataset& data,
                                               const RiskSpec& risk, const PriorSpec& prior);

/// Step 3.
Eigen::VectorXd step3_update_coefficients(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                                          const PriorSpec& prior, Rng& rng);

/// Starting state: anchor only, beta1 = +1, then one Z pass.
SamplerState initial_state(const Dataset& data, const RiskSpec& risk, const SamplerConfig& config);

/// Target of the Metropolis backend:
///   log prior - psi sum_i rho(y_i, A_i).
double metropolis_log_target(const ModelIndicator& indicator, const Coefficients& coeffs, const Dataset& data,
                             const RiskSpec& risk, const PriorSpec& prior);

ChainOutput run_chain(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                      const SamplerConfig& config);
ChainOutput run_metropolis(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                           const SamplerConfig& config);
/// Dispatches on config.backend.
ChainOutput run_sampler(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                        const SamplerConfig& config);

/// Independent chains 0..chains-1 run concurrently on disjoint streams.
std::vector<ChainOutput> run_chains(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                                    const SamplerConfig& config, std::uint32_t chains);

/// Trace CSV: `# key=value` header lines, then
/// iteration,model_size,R_n_smoothed,beta1,accepted_moves.
void write_trace_csv(std::ostream& out, const ChainOutput& chain,
                     const std::vector<std::pair<std::string, std::string>>& header);

/// Shortest round-trip decimal form, used for every float written to disk.
std::string format_double(double x);

}  // namespace gibbsvs
