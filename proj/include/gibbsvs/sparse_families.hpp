#pragma once

// Membership predicates for the sparse rule families and the empirical
// inclusion checks between them.
//
// For beta with |beta_1| = 1, write b_(1) >= b_(2) >= ... for the sorted
// magnitudes of the non-anchor coefficients and v_n = n delta^2 / (ln n)^2.
// "Head" means positions j <= v_n, "tail" positions j > v_n.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gibbsvs {

enum class Family { Hb, H1, H2, H3, Hm, HE };

const char* to_string(Family f);

struct FamilySpec {
  Family family = Family::Hb;
  double c = 1.0;         // C
  double c_prime = 1.0;   // C'
  double c_dprime = 1.0;  // C''
  double m = 1.0;
  double q = 1.0;
  std::size_t n = 100;
  double delta_n = 0.0;

  /// n delta^2 / (ln n)^2, kept real-valued.
  double v_n() const;
  void validate() const;
};

/// Magnitudes of beta[1..] sorted descending; ties keep index order.
std::vector<double> sorted_magnitudes(const Eigen::VectorXd& beta);

bool is_member(const Eigen::VectorXd& beta, const FamilySpec& spec);

/// Constants shared by every family in an inclusion check.
struct InclusionConstants {
  double c = 1.0;
  double c_prime = 1.0;
  double c_dprime = 1.0;
  double m = 2.0;
  double q = 20.0;
};

struct InclusionPart {
  std::string name;      // "(i) H1 > H2", ...
  std::size_t premise = 0;      // betas in the smaller family
  std::size_t violations = 0;   // of those, betas outside the larger one
  std::vector<Eigen::VectorXd> counterexamples;  // first few
};

struct InclusionReport {
  std::vector<InclusionPart> parts;
  bool ok() const;
};

/// Checks parts (i)-(iii) and (vi)-(viii) for every n in the grid. (i)-(iii)
/// use delta = n^{-1/2} (ln n)^2; (vii) uses n^{-m/(2m+1)} (ln n)^2 and (viii)
/// n^{-1/2} (ln n)^2, the smallest delta each part allows.
InclusionReport check_inclusions(const InclusionConstants& constants, const std::vector<std::size_t>& n_grid,
                                 const std::vector<Eigen::VectorXd>& betas);

/// Random betas of assorted shapes (few large entries, geometric and
/// polynomial tails, dense small noise), anchor +-1, length k.
std::vector<Eigen::VectorXd> random_trial_betas(std::size_t count, std::size_t k, double scale, std::uint64_t seed);

/// beta = (1, C, ..., C, 0, ...) with floor(v_n) copies of C.
Eigen::VectorXd witness_hb_not_h3(std::size_t k, const FamilySpec& spec);

/// beta = (1, a/2, a/4, ...), a = C' delta / ln n, over all K - 1 slots.
Eigen::VectorXd witness_h3_not_hb(std::size_t k, const FamilySpec& spec);

}  // namespace gibbsvs
