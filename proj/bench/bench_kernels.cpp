// Serial reference vs OpenMP kernels on one training-sized problem.

#include <benchmark/benchmark.h>

#include "gibbsvs/generators.hpp"
#include "gibbsvs/kernels.hpp"

using namespace gibbsvs;
namespace k = gibbsvs::kernels;

namespace {

struct Problem {
  Dataset data;
  RiskSpec spec;
  std::vector<std::size_t> cols{1, 5, 9, 13};
  std::vector<double> vals{0.4, -0.7, 0.2, 1.1};
  Eigen::VectorXd m, z, out;

  explicit Problem(std::size_t n)
      : data(gen_sparse_linear(64, n, 4, 1.0, 0.1, 1).first),
        spec(derive_risk_spec(kClassificationLoss, 1.0, default_sigma(n))) {
    k::serial::linear_predictor(data.features(), beta(), m);
    z = m;
  }
  k::SparseBeta beta() const { return {1.0, cols, vals}; }
};

Problem& problem(std::size_t n) {
  static Problem p(1 << 20);
  static Problem q(1 << 14);
  return n == (1u << 20) ? p : q;
}

template <bool Omp>
void BM_linear_predictor(benchmark::State& st) {
  Problem& p = problem(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) k::omp::linear_predictor(p.data.features(), p.beta(), p.m);
    else k::serial::linear_predictor(p.data.features(), p.beta(), p.m);
    benchmark::DoNotOptimize(p.m.data());
  }
}

template <bool Omp>
void BM_cross_products(benchmark::State& st) {
  Problem& p = problem(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Omp) k::omp::cross_products(p.data.features(), p.z, p.out);
    else k::serial::cross_products(p.data.features(), p.z, p.out);
    benchmark::DoNotOptimize(p.out.data());
  }
}

template <bool Omp>
void BM_smoothed_log_likelihood(benchmark::State& st) {
  Problem& p = problem(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Omp ? k::omp::smoothed_log_likelihood(p.m, p.data.labels(), p.spec)
                   : k::serial::smoothed_log_likelihood(p.m, p.data.labels(), p.spec);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Omp>
void BM_update_latent(benchmark::State& st) {
  Problem& p = problem(static_cast<std::size_t>(st.range(0)));
  k::LatentPass pass{1, 0, k::LatentMechanism::exact_mixture};
  for (auto _ : st) {
    ++pass.stream;
    if constexpr (Omp) k::omp::update_latent(p.m, p.data.labels(), p.spec, pass, p.z);
    else k::serial::update_latent(p.m, p.data.labels(), p.spec, pass, p.z);
    benchmark::DoNotOptimize(p.z.data());
  }
}

}  // namespace

#define PAIR(fn)                                                                          \
  BENCHMARK(fn<false>)->Name(#fn "/serial")->Arg(1 << 14)->Arg(1 << 20)->UseRealTime(); \
  BENCHMARK(fn<true>)->Name(#fn "/omp")->Arg(1 << 14)->Arg(1 << 20)->UseRealTime()

PAIR(BM_linear_predictor);
PAIR(BM_cross_products);
PAIR(BM_smoothed_log_likelihood);
PAIR(BM_update_latent);

BENCHMARK_MAIN();
