#pragma once

// Size-restricted normal-binary prior over (beta1, gamma, active coefficients).

#include <vector>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/rng.hpp"

namespace gibbsvs {

struct PriorDraw {
  ModelIndicator indicator;
  Coefficients coefficients;
};

/// Non-anchor bits i.i.d. Bernoulli(lambda), redrawn until |gamma|_1 <= rbar;
/// beta1 uniform on {+1,-1}; active ~ N(0, v I). Throws NumericAbort after
/// 1e6 consecutive cap rejections.
PriorDraw sample_prior(const PriorSpec& prior, Rng& rng);

/// ln Z_trunc = ln sum_{r <= rbar-1} C(K-1, r) lambda^r (1-lambda)^{K-1-r}.
double log_truncation_normalizer(const PriorSpec& prior);

/// P(|gamma|_1 - 1 = r) under the truncated prior, r = 0..rbar-1.
std::vector<double> truncated_size_pmf(const PriorSpec& prior);

/// (|gamma|-1) ln lambda + (K-|gamma|) ln(1-lambda) - ln Z_trunc, or -inf
/// above the cap. Uses 0 ln 0 = 0 for the degenerate lambda in {0, 1}.
double log_prior_model(const ModelIndicator& indicator, const PriorSpec& prior);

/// ln 0.5 plus the N(0, v I) log-density of the active coefficients.
double log_prior_coefficients(const Coefficients& coeffs, const ModelIndicator& indicator,
                              const PriorSpec& prior);

/// ln of lambda^b (1-lambda)^{1-b} with the same 0 ln 0 convention.
double log_bernoulli(double lambda, bool bit);

}  // namespace gibbsvs
