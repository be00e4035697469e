#pragma once

#include "gibbsvs/rng.hpp"

namespace gibbsvs {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // 0.5 ln(2 pi)

/// Standard normal CDF via erfc.
double norm_cdf(double x);

/// ln Phi(x), accurate in both tails (no ln 0 for very negative x).
double log_norm_cdf(double x);

/// ln of the N(mean, var) density at x.
double log_normal_pdf(double x, double mean, double var);

/// Draws from N(mean, sd^2) conditioned on Z > lower.
double truncated_normal_above(Rng& rng, double mean, double sd, double lower);

/// Draws from N(mean, sd^2) conditioned on Z <= upper.
double truncated_normal_below(Rng& rng, double mean, double sd, double upper);

}  // namespace gibbsvs
