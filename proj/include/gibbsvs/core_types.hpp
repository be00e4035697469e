#pragma once

// Shared domain records for Gibbs-posterior variable selection.
//
// Everything here is a value type. Objects validate their invariants on
// construction and throw ConfigError when handed something malformed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gibbsvs {

/// Invalid input or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure gave up (runaway rejection loop, non-SPD matrix
/// after jitter, ...). Maps to CLI exit code 4.
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Labels = std::vector<std::uint8_t>;

/// n labelled observations over K features. Column 0 is the anchor feature.
///
/// Labels must be 0/1 and the shape must be non-empty. The |x| <= 1 bound is
/// *not* enforced here; it is a hard check in validate_conditions() so that a
/// badly scaled file produces a condition report instead of a bare throw.
class Dataset {
 public:
  static constexpr std::size_t anchor_index = 0;

  Dataset(Labels labels, Eigen::MatrixXd features, std::string provenance,
          bool condition_0pp_declared = false);

  std::size_t n() const { return labels_.size(); }
  std::size_t k() const { return static_cast<std::size_t>(features_.cols()); }

  const Labels& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  const Eigen::MatrixXd& features() const { return features_; }
  auto column(std::size_t j) const { return features_.col(static_cast<Eigen::Index>(j)); }
  const std::string& provenance() const { return provenance_; }

  /// Whether the producer of this data asserts a bounded conditional density
  /// for the anchor given the rest. Not checkable from a finite sample.
  bool condition_0pp_declared() const { return condition_0pp_declared_; }

  /// True when every feature entry lies in [-1, 1].
  bool features_bounded() const;

  double label_mean() const;

 private:
  Labels labels_;
  Eigen::MatrixXd features_;
  std::string provenance_;
  bool condition_0pp_declared_ = false;
};

/// Binary model indicator over K features with the anchor always included.
class ModelIndicator {
 public:
  /// Anchor-only model.
  explicit ModelIndicator(std::size_t k);
  /// From a full bit pattern; bits[0] must be 1.
  explicit ModelIndicator(std::vector<std::uint8_t> bits);
  /// Anchor plus the listed non-anchor features.
  static ModelIndicator from_active(std::size_t k, const std::vector<std::size_t>& active);

  std::size_t k() const { return bits_.size(); }
  /// |gamma|_1, anchor included.
  std::size_t size() const { return size_; }
  bool test(std::size_t j) const { return bits_[j] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Sets a non-anchor bit. Throws on j == 0.
  void set(std::size_t j, bool on);

  /// Selected non-anchor features in ascending order.
  std::vector<std::size_t> active() const;

  friend bool operator==(const ModelIndicator&, const ModelIndicator&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t size_ = 1;
};

/// beta_1 in {+1,-1} plus the coefficients of the selected non-anchor
/// features, ordered like ModelIndicator::active().
struct Coefficients {
  int beta1 = 1;
  Eigen::VectorXd active;

  friend bool operator==(const Coefficients& a, const Coefficients& b) {
    return a.beta1 == b.beta1 && a.active.size() == b.active.size() && a.active == b.active;
  }
};

/// Checks that coefficients and indicator belong together.
void check_shapes(const ModelIndicator& indicator, const Coefficients& coeffs);

/// Dense K-vector with beta1 at the anchor, active values at the selected
/// positions and zeros elsewhere.
Eigen::VectorXd assemble_beta(const ModelIndicator& indicator, const Coefficients& coeffs);

/// 2x2 loss matrix rho(y, a): first index is the label, second the action.
using LossMatrix = std::array<std::array<double, 2>, 2>;

inline constexpr LossMatrix kClassificationLoss{{{0.0, 1.0}, {1.0, 0.0}}};

/// Loss matrix plus the derived mixture construction used by the smoothed
/// sample risk. Built by derive_risk_spec().
struct RiskSpec {
  LossMatrix rho{};
  double q = 0.0;
  double h = 0.0;
  double psi = 0.0;
  double sigma_n = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  /// log_a[s][y] = y ln p_s + (1-y) ln(1 - p_s), computed without
  /// cancellation for large psi*q.
  std::array<std::array<double, 2>, 2> log_a{};

  double loss(int y, int a) const { return rho[static_cast<std::size_t>(y)][static_cast<std::size_t>(a)]; }
  /// Upper bound Q of a single smoothed-risk term.
  double term_bound() const;
};

RiskSpec derive_risk_spec(const LossMatrix& rho, double psi, double sigma_n);

/// Size-restricted normal-binary prior: non-anchor indicators i.i.d.
/// Bernoulli(lambda) truncated to |gamma|_1 <= rbar, coefficients N(0, v I).
struct PriorSpec {
  double lambda = 0.0;
  std::size_t rbar = 1;
  double v = 1.0;
  std::size_t k = 1;
  /// Eigenvalue bound B of condition (V).
  double eig_bound = 10.0;
};

/// Validates and returns the spec. lambda may be 0 or 1 (degenerate priors are
/// useful in tests); 1 <= rbar <= K; max(v, 1/v) <= eig_bound.
PriorSpec make_prior_spec(double lambda, std::size_t rbar, double v, std::size_t k,
                          double eig_bound = 10.0);

/// Constants of the (r_delta) window.
struct SizeRule {
  double m_upper = 2.0;   // M
  double m_lower = 0.5;   // M'
};

/// n^{-1/2} (ln n)^2.
double default_delta(std::size_t n);

/// n delta^2 / (ln n)^2.
double sparsity_budget(std::size_t n, double delta);

/// Prior with rbar = max(1, floor(M n delta^2/(ln n)^2)) (clamped to K) and
/// lambda chosen so that lambda*K = rbar/2.
PriorSpec auto_prior_spec(std::size_t n, std::size_t k, double v, double delta,
                          const SizeRule& rule = {}, double eig_bound = 10.0);

/// sqrt(ln n / n).
double default_sigma(std::size_t n);

enum class ConditionStatus { pass, warn, fail };

const char* to_string(ConditionStatus s);

struct ConditionEntry {
  std::string name;
  ConditionStatus status = ConditionStatus::pass;
  std::string message;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  double delta_n = 0.0;

  bool blocking() const;
  const ConditionEntry* find(const std::string& name) const;
  std::string to_json() const;
};

ConditionReport validate_conditions(const Dataset& data, const PriorSpec& prior,
                                    const RiskSpec& risk, double delta_n,
                                    const SizeRule& rule = {});

}  // namespace gibbsvs
