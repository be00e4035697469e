#include "gibbsvs/normal.hpp"

#include <cmath>

#include "gibbsvs/core_types.hpp"

namespace gibbsvs {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double log_norm_cdf(double x) {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x * M_SQRT1_2));
  if (x > -37.0) return std::log(0.5 * std::erfc(-x * M_SQRT1_2));
  // Asymptotic Mills-ratio series; six terms are below 2e-15 relative here.
  const double t = 1.0 / (x * x);
  const double series =
      1.0 + t * (-1.0 + t * (3.0 + t * (-15.0 + t * (105.0 + t * (-945.0 + t * 10395.0)))));
  return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * d * d / var - 0.5 * std::log(var) - kLogSqrt2Pi;
}

namespace {

// X ~ N(0,1) | X > a.
double standard_tail(Rng& rng, double a) {
  constexpr int kMaxTries = 1'000'000;
  if (a <= 0.0) {
    for (int t = 0; t < kMaxTries; ++t) {
      const double x = rng.normal();
      if (x > a) return x;
    }
  } else {
    // Robert (1995): translated exponential proposal with the optimal rate.
    const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (int t = 0; t < kMaxTries; ++t) {
      const double z = a - std::log(rng.uniform()) / rate;
      const double d = z - rate;
      if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
    }
  }
  throw NumericAbort("truncated normal: rejection sampler exceeded 1e6 tries");
}

}  // namespace

double truncated_normal_above(Rng& rng, double mean, double sd, double lower) {
  return mean + sd * standard_tail(rng, (lower - mean) / sd);
}

double truncated_normal_below(Rng& rng, double mean, double sd, double upper) {
  return mean - sd * standard_tail(rng, (mean - upper) / sd);
}

}  // namespace gibbsvs
