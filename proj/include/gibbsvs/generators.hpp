#pragma once

// Synthetic data sources and CSV ingestion.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "gibbsvs/core_types.hpp"

namespace gibbsvs {

enum class GeneratorKind { misspecified_logistic, indicator_grid, sparse_linear, file };

const char* to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::misspecified_logistic;
  /// P(x = +-1) for the misspecified-logistic source.
  double lambda = 0.125;
  /// Feature count for indicator-grid and sparse-linear.
  std::size_t k = 2;
  /// Number of non-anchor features in the sparse-linear truth.
  std::size_t support = 3;
  double coef_scale = 1.0;
  /// Label flip probability for sparse-linear.
  double noise = 0.0;
  std::string path;
  std::string label_column = "y";
  /// Anchor column name for CSV input; empty means first non-label column.
  std::string anchor_column;
  std::uint64_t seed = 0;

  bool declares_condition_0pp() const;
  /// True when population risk can be computed by enumeration.
  bool finite_support() const;
  /// Feature count of emitted datasets.
  std::size_t feature_count() const;
};

/// Throws ConfigError on out-of-range parameters.
void validate(const GeneratorSpec& spec);

/// n rows from the source. Different `stream` values give independent
/// samples from the same population (training vs. holdout).
Dataset sample(const GeneratorSpec& spec, std::size_t n, std::uint64_t stream = 0);

/// x in {-1, 0, 1} with P(+-1) = lambda; features (x, 1); y = I[x != 0].
Dataset gen_misspecified_logistic(double lambda, std::size_t n, std::uint64_t seed);

/// z uniform on {1/K, ..., K/K}; x_j = I[z = (K+1-j)/K]; y = I[z = 1].
Dataset gen_indicator_grid(std::size_t k, std::size_t n, std::uint64_t seed);

/// The sparse-linear truth for (K, support, coef_scale, seed): anchor +1 and
/// `support` randomly placed coefficients of magnitude coef_scale with random
/// signs.
Eigen::VectorXd sparse_linear_truth(std::size_t k, std::size_t support, double coef_scale,
                                    std::uint64_t seed);

/// Uniform[-1,1] features, y = I[x^T beta > 0] flipped with probability noise.
std::pair<Dataset, Eigen::VectorXd> gen_sparse_linear(std::size_t k, std::size_t n,
                                                      std::size_t support, double coef_scale,
                                                      double noise, std::uint64_t seed);

/// Reads a headed, comma-separated file. Each feature column is mapped
/// affinely onto [-1, 1] by its min/max (constant columns become 0); the maps
/// are recorded in the provenance string.
Dataset ingest_csv(const std::string& path, const std::string& label_column,
                   const std::string& anchor_column = {});

}  // namespace gibbsvs
