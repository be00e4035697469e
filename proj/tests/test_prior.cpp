#include <cmath>
#include <numeric>

#include <doctest.h>

#include "gibbsvs/normal.hpp"
#include "gibbsvs/prior.hpp"

using namespace gibbsvs;

namespace {

double binom(int n, int r) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0)); }

}  // namespace

TEST_CASE("degenerate lambda") {
  Rng rng(1, 1);
  const PriorSpec zero = make_prior_spec(0.0, 3, 1.0, 6);
  const PriorSpec one = make_prior_spec(1.0, 6, 1.0, 6);
  for (int t = 0; t < 50; ++t) {
    const PriorDraw a = sample_prior(zero, rng);
    CHECK(a.indicator.size() == 1);
    CHECK(a.coefficients.active.size() == 0);
    const PriorDraw b = sample_prior(one, rng);
    CHECK(b.indicator.size() == 6);
  }
  CHECK(log_prior_model(ModelIndicator(6), zero) == 0.0);
  CHECK(std::isinf(log_prior_model(ModelIndicator::from_active(6, {2}), zero)));
}

TEST_CASE("truncated size mean: lambda 0.01, K 1000, rbar 30") {
  const PriorSpec p = make_prior_spec(0.01, 30, 1.0, 1000);
  double num = 0.0, den = 0.0;
  for (int r = 0; r < 30; ++r) {
    const double w = binom(999, r) * std::pow(0.01, r) * std::pow(0.99, 999 - r);
    num += r * w;
    den += w;
  }
  const double mean = num / den;
  Rng rng(5, 5);
  const int draws = 100000;
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double r = static_cast<double>(sample_prior(p, rng).indicator.size() - 1);
    s += r;
    s2 += r * r;
  }
  const double m = s / draws, se = std::sqrt((s2 / draws - m * m) / draws);
  CHECK(std::abs(m - mean) <= 3 * se);
  const auto pmf = truncated_size_pmf(p);
  double pm = 0.0;
  for (std::size_t r = 0; r < pmf.size(); ++r) pm += static_cast<double>(r) * pmf[r];
  CHECK(pm == doctest::Approx(mean).epsilon(1e-10));
}

TEST_CASE("no truncation when rbar = K") {
  const PriorSpec p = make_prior_spec(0.3, 5, 1.0, 5);
  CHECK(log_truncation_normalizer(p) == doctest::Approx(0.0).epsilon(1e-14));
  const ModelIndicator g = ModelIndicator::from_active(5, {1, 4});
  CHECK(log_prior_model(g, p) == doctest::Approx(2 * std::log(0.3) + 2 * std::log(0.7)).epsilon(1e-14));
}

TEST_CASE("size cap") {
  const PriorSpec p = make_prior_spec(0.3, 2, 1.0, 5);
  CHECK(log_prior_model(ModelIndicator::from_active(5, {1, 2}), p) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("K 5, lambda 0.3, rbar 2 normalizer") {
  const PriorSpec p = make_prior_spec(0.3, 2, 1.0, 5);
  const double z = std::pow(0.7, 4) + 4 * 0.3 * std::pow(0.7, 3);
  CHECK(log_truncation_normalizer(p) == doctest::Approx(std::log(z)).epsilon(1e-14));
  CHECK(log_prior_model(ModelIndicator::from_active(5, {3}), p) ==
        doctest::Approx(std::log(0.3) + 3 * std::log(0.7) - std::log(z)).epsilon(1e-14));
}

TEST_CASE("the model prior sums to one") {
  for (std::size_t k = 1; k <= 12; ++k)
    for (std::size_t rbar = 1; rbar <= k; rbar += 2)
      for (double lambda : {0.0, 0.1, 0.5, 0.93}) {
        const PriorSpec p = make_prior_spec(lambda, rbar, 1.0, k);
        double total = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
          std::vector<std::uint8_t> bits(k, 0);
          bits[0] = 1;
          for (std::size_t j = 1; j < k; ++j) bits[j] = (mask >> (j - 1)) & 1;
          total += std::exp(log_prior_model(ModelIndicator(bits), p));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("coefficient log-density") {
  const PriorSpec p1 = make_prior_spec(0.5, 3, 1.0, 3);
  Coefficients c;
  CHECK(log_prior_coefficients(c, ModelIndicator(3), p1) == doctest::Approx(std::log(0.5)));
  c.active = Eigen::VectorXd::Zero(1);
  CHECK(log_prior_coefficients(c, ModelIndicator::from_active(3, {1}), p1) ==
        doctest::Approx(std::log(0.5) - 0.5 * std::log(2 * M_PI)));
  const PriorSpec p2 = make_prior_spec(0.5, 3, 2.0, 3);
  c.active = Eigen::Vector2d(1.0, 2.0);
  const double direct = std::log(0.5) - std::log(2 * M_PI * 2.0) - (1.0 + 4.0) / 4.0;
  CHECK(log_prior_coefficients(c, ModelIndicator::from_active(3, {1, 2}), p2) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("draws respect the cap and the sign is fair") {
  const PriorSpec p = make_prior_spec(0.6, 3, 1.5, 10);
  Rng rng(2, 3);
  int plus = 0;
  for (int t = 0; t < 20000; ++t) {
    const PriorDraw d = sample_prior(p, rng);
    REQUIRE(d.indicator.size() <= 3);
    REQUIRE(static_cast<std::size_t>(d.coefficients.active.size()) == d.indicator.size() - 1);
    plus += d.coefficients.beta1 == 1;
  }
  CHECK(std::abs(plus - 10000) < 4 * 71);
}

TEST_CASE("log_bernoulli") {
  CHECK(log_bernoulli(0.25, true) == doctest::Approx(std::log(0.25)));
  CHECK(log_bernoulli(0.25, false) == doctest::Approx(std::log(0.75)));
  CHECK(log_bernoulli(0.0, false) == 0.0);
  CHECK(std::isinf(log_bernoulli(0.0, true)));
}
