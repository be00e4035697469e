#include <cmath>

#include <doctest.h>

#include "gibbsvs/generators.hpp"
#include "gibbsvs/normal.hpp"
#include "gibbsvs/risk.hpp"
#include "gibbsvs/rng.hpp"

using namespace gibbsvs;

namespace {

// Three points on the anchor only: x = (1, -1, 1) with labels (1, 1, 1).
Dataset three() {
  Eigen::MatrixXd x(3, 1);
  x << 1, -1, 1;
  return Dataset({1, 1, 1}, x, "three");
}

GeneratorSpec misspecified() {
  GeneratorSpec g;
  g.kind = GeneratorKind::misspecified_logistic;
  g.lambda = 0.125;
  return g;
}

}  // namespace

TEST_CASE("perfect, complement and partial rules") {
  Eigen::MatrixXd x(4, 1);
  x << 1, -1, 0.5, -0.2;
  const Dataset d({1, 0, 1, 0}, x, "sep");
  const RiskSpec& c = classification_spec();
  CHECK(empirical_risk_unsmoothed(Eigen::VectorXd::Constant(1, 1.0), d, c) == 0.0);
  CHECK(empirical_risk_unsmoothed(Eigen::VectorXd::Constant(1, -1.0), d, c) == 1.0);
  CHECK(empirical_risk_unsmoothed(Eigen::VectorXd::Constant(1, 1.0), three(), c) == doctest::Approx(1.0 / 3.0));
  CHECK(empirical_risk_unsmoothed(Eigen::VectorXd::Constant(1, -1.0), three(), c) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("sparse and dense rule paths agree") {
  auto [d, truth] = gen_sparse_linear(12, 300, 3, 1.0, 0.1, 5);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.3, 0.2);
  const DecisionRule r = DecisionRule::make(12, -1, {7, 2}, {0.5, -0.25});
  CHECK(r.indicator.active() == std::vector<std::size_t>{2, 7});
  CHECK(empirical_risk_unsmoothed(r, d, s) == empirical_risk_unsmoothed(r.beta(), d, s));
  CHECK(sample_risk_smoothed(r, d, s) == doctest::Approx(sample_risk_smoothed(r.beta(), d, s)).epsilon(1e-14));
}

TEST_CASE("smoothed risk at a zero score is ln 2 / psi") {
  Eigen::MatrixXd x(1, 1);
  x << 0.0;
  const Dataset d({1}, x, "one");
  for (double psi : {0.5, 1.0, 3.0}) {
    const RiskSpec s = derive_risk_spec(kClassificationLoss, psi, 0.7);
    CHECK(sample_risk_smoothed(Eigen::VectorXd::Constant(1, 1.0), d, s) == doctest::Approx(std::log(2.0) / psi).epsilon(1e-13));
  }
}

TEST_CASE("smoothed risk tends to -ln p1 / psi for large scores") {
  Eigen::MatrixXd x(1, 1);
  x << 1.0;
  const Dataset d({1}, x, "one");
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 2.0, 1e-3);
  CHECK(sample_risk_smoothed(Eigen::VectorXd::Constant(1, 1.0), d, s) == doctest::Approx(-std::log(s.p1) / 2.0).epsilon(1e-12));
}

TEST_CASE("smoothed risk matches a direct formula on random data") {
  Rng r(1, 2);
  Eigen::MatrixXd x(5, 3);
  Labels y(5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = 2 * r.uniform() - 1;
    y[static_cast<std::size_t>(i)] = r.bernoulli(0.5);
  }
  const Dataset d(y, x, "rand");
  const Eigen::Vector3d beta(1.0, -0.3, 0.8);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.0, 0.1);
  double direct = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double phi = 0.5 * std::erfc(-(x.row(i).dot(beta) / 0.1) / std::sqrt(2.0));
    const double p1 = std::exp(1.0) / (1 + std::exp(1.0)), p0 = 1 / (1 + std::exp(1.0));
    const int yi = y[static_cast<std::size_t>(i)];
    direct += std::log(phi * (yi ? p1 : 1 - p1) + (1 - phi) * (yi ? p0 : 1 - p0));
  }
  CHECK(sample_risk_smoothed(beta, d, s) == doctest::Approx(-direct / 5.0).epsilon(1e-12));
}

TEST_CASE("smoothed risk stays within [0, Q]") {
  auto [d, truth] = gen_sparse_linear(6, 200, 2, 1.0, 0.2, 9);
  const RiskSpec s = derive_risk_spec({{{0.2, 1.0}, {3.0, 0.0}}}, 2.5, 0.05);
  Rng r(8, 8);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd b(6);
    for (int j = 0; j < 6; ++j) b[j] = 3 * r.normal();
    const double v = sample_risk_smoothed(b, d, s);
    CHECK(v >= 0.0);
    CHECK(v <= s.term_bound() + 1e-12);
  }
}

TEST_CASE("indicator risk differs from the unsmoothed risk by a rule-free constant") {
  auto [d, truth] = gen_sparse_linear(5, 400, 2, 1.0, 0.2, 3);
  const RiskSpec s = derive_risk_spec({{{0.1, 1.2}, {2.0, 0.3}}}, 1.4, 0.3);
  const double c = indicator_risk_offset(s, d.label_mean());
  Rng r(4, 4);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd b(5);
    for (int j = 0; j < 5; ++j) b[j] = r.normal();
    CHECK(sample_risk_indicator(b, d, s) == doctest::Approx(empirical_risk_unsmoothed(b, d, s) + c).epsilon(1e-10));
  }
}

TEST_CASE("misspecified source: exact population risks") {
  const GeneratorSpec g = misspecified();
  const RiskSpec& c = classification_spec();
  CHECK(population_risk_analytic(Eigen::Vector2d(1.0, -0.7), g, c) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(population_risk_analytic(Eigen::Vector2d(-1.0, 0.7), g, c) == doctest::Approx(0.875).epsilon(1e-15));
  // always-0: x^T beta = 0 * x - 1 < 0
  CHECK(population_risk_analytic(Eigen::Vector2d(0.0, -1.0), g, c) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("misspecified source: Monte Carlo agrees with the exact risk") {
  const GeneratorSpec g = misspecified();
  const RiskSpec& c = classification_spec();
  const RiskEstimate a = population_risk_mc(Eigen::Vector2d(1.0, -0.7), g, 1000000, 5, c);
  CHECK(std::abs(a.mean - 0.125) <= 3 * a.se);
  const RiskEstimate b = population_risk_mc(Eigen::Vector2d(0.0, -1.0), g, 1000000, 5, c);
  CHECK(std::abs(b.mean - 0.25) <= 3 * b.se);
  // Complement rule on the same draws.
  const RiskEstimate a2 = population_risk_mc(Eigen::Vector2d(-1.0, 0.7), g, 1000000, 5, c);
  CHECK(a.mean + a2.mean == doctest::Approx(1.0).epsilon(1e-12));
  // Reproducible.
  CHECK(population_risk_mc(Eigen::Vector2d(1.0, -0.7), g, 100000, 9, c).mean ==
        population_risk_mc(Eigen::Vector2d(1.0, -0.7), g, 100000, 9, c).mean);
}

TEST_CASE("indicator grid: the anchor rule is perfect") {
  GeneratorSpec g;
  g.kind = GeneratorKind::indicator_grid;
  g.k = 50;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(50);
  b[0] = 1.0;
  CHECK(population_risk_analytic(b, g, classification_spec()) == 0.0);
  b[0] = -1.0;
  CHECK(population_risk_analytic(b, g, classification_spec()) == doctest::Approx(1.0 / 50.0));
}

TEST_CASE("analytic risk needs a finite-support source") {
  GeneratorSpec g;
  g.kind = GeneratorKind::sparse_linear;
  g.k = 4;
  CHECK_THROWS_AS(population_risk_analytic(Eigen::VectorXd::Ones(4), g, classification_spec()), ConfigError);
}
