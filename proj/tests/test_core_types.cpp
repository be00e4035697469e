#include <cmath>

#include <doctest.h>

#include "gibbsvs/core_types.hpp"

using namespace gibbsvs;

namespace {

Dataset tiny(double entry = 0.5) {
  Eigen::MatrixXd x(3, 2);
  x << 1, entry, -1, 0, 0.5, 1;
  return Dataset({1, 0, 1}, x, "tiny");
}

}  // namespace

TEST_CASE("classification loss gives q = 2, h = 0.5") {
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.0, 1.0);
  CHECK(s.q == doctest::Approx(2.0));
  CHECK(s.h == doctest::Approx(0.5));
}

TEST_CASE("profit matrix g = 100, c = 1") {
  const LossMatrix rho{{{0.0, 1.0}, {0.0, -99.0}}};
  const RiskSpec s = derive_risk_spec(rho, 1.0, 1.0);
  CHECK(s.q == doctest::Approx(100.0));
  CHECK(s.h == doctest::Approx(0.01));
  CHECK(s.p0 < s.p1);
}

TEST_CASE("symmetric loss gives logistic mixture probabilities") {
  for (double psi : {0.01, 0.3, 1.0, 5.0, 40.0}) {
    const RiskSpec s = derive_risk_spec(kClassificationLoss, psi, 1.0);
    CHECK(s.p1 == doctest::Approx(std::exp(psi) / (1.0 + std::exp(psi))).epsilon(1e-12));
    CHECK(s.p0 == doctest::Approx(1.0 / (1.0 + std::exp(psi))).epsilon(1e-12));
    CHECK(s.p0 + s.p1 == doctest::Approx(1.0).epsilon(1e-14));
    // log_a stays finite and consistent.
    CHECK(std::exp(s.log_a[1][1]) == doctest::Approx(s.p1).epsilon(1e-12));
    CHECK(std::exp(s.log_a[0][0]) == doctest::Approx(1.0 - s.p0).epsilon(1e-12));
  }
}

TEST_CASE("large psi q keeps log weights finite") {
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 500.0, 1.0);
  for (const auto& row : s.log_a)
    for (double a : row) CHECK(std::isfinite(a));
  CHECK(s.log_a[0][1] == doctest::Approx(-500.0).epsilon(1e-9));
}

TEST_CASE("invalid loss matrices and parameters are rejected") {
  CHECK_THROWS_AS(derive_risk_spec({{{1.0, 1.0}, {1.0, 0.0}}}, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_risk_spec({{{0.0, 1.0}, {0.0, 0.0}}}, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_risk_spec(kClassificationLoss, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_risk_spec(kClassificationLoss, 1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(derive_risk_spec({{{0.0, NAN}, {1.0, 0.0}}}, 1.0, 1.0), ConfigError);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset({0, 2, 1}, Eigen::MatrixXd::Zero(3, 1), "bad labels"), ConfigError);
  CHECK_THROWS_AS(Dataset({0, 1}, Eigen::MatrixXd::Zero(3, 1), "shape"), ConfigError);
  const Dataset d = tiny();
  CHECK(d.n() == 3);
  CHECK(d.k() == 2);
  CHECK(d.features_bounded());
  CHECK(d.label_mean() == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(tiny(1.5).features_bounded());
}

TEST_CASE("model indicator") {
  ModelIndicator g(4);
  CHECK(g.size() == 1);
  CHECK(g.test(0));
  g.set(2, true);
  g.set(3, true);
  CHECK(g.size() == 3);
  CHECK(g.active() == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(g.set(0, false), ConfigError);
  CHECK_THROWS_AS(ModelIndicator(std::vector<std::uint8_t>{0, 1}), ConfigError);
  CHECK(ModelIndicator::from_active(4, {3, 2}) == g);
}

TEST_CASE("assemble_beta places coefficients") {
  const ModelIndicator g = ModelIndicator::from_active(4, {1, 3});
  Coefficients c;
  c.beta1 = -1;
  c.active = Eigen::Vector2d(0.5, -2.0);
  const Eigen::VectorXd b = assemble_beta(g, c);
  CHECK(b[0] == -1.0);
  CHECK(b[1] == 0.5);
  CHECK(b[2] == 0.0);
  CHECK(b[3] == -2.0);
  c.active = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(check_shapes(g, c), ConfigError);
}

TEST_CASE("conditions in the high-dimensional regime") {
  // n = 100, K = 1000, default delta. With natural logs delta_n = (ln 100)^2 / 10
  // = 2.12, so 1' (delta_n < 1) only warns; 3' passes.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(100, 1000);
  Labels y(100, 0);
  const Dataset d(y, x, "zeros");
  const PriorSpec p = make_prior_spec(0.001, 2, 1.0, 1000);
  const RiskSpec r = derive_risk_spec(kClassificationLoss, 1.0, default_sigma(100));
  const ConditionReport rep = validate_conditions(d, p, r, default_delta(100));
  CHECK(rep.delta_n == doctest::Approx(std::pow(std::log(100.0), 2) / 10.0));
  CHECK(rep.find("3'")->status == ConditionStatus::pass);
  CHECK(rep.find("1'")->status == ConditionStatus::warn);
  CHECK(rep.find("sigma")->status == ConditionStatus::pass);
  CHECK_FALSE(rep.blocking());

  // 1' holds once n is large enough for (ln n)^2 / sqrt(n) < 1.
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(100000, 2);
  const Dataset big(Labels(100000, 0), x2, "zeros");
  const ConditionReport rep2 = validate_conditions(big, make_prior_spec(0.5, 2, 1.0, 2),
                                                   derive_risk_spec(kClassificationLoss, 1.0, 0.01),
                                                   default_delta(100000));
  CHECK(rep2.find("1'")->status == ConditionStatus::pass);
  CHECK(rep2.find("3'")->status == ConditionStatus::warn);
}

TEST_CASE("an entry of 1.5 is a hard failure") {
  const Dataset d = tiny(1.5);
  const ConditionReport rep = validate_conditions(d, make_prior_spec(0.5, 2, 1.0, 2),
                                                  derive_risk_spec(kClassificationLoss, 1.0, 0.5), 0.5);
  CHECK(rep.find("0'")->status == ConditionStatus::fail);
  CHECK(rep.blocking());
}

TEST_CASE("sigma_n = 10 at n = 100 warns on the lower edge") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(100, 2);
  const Dataset d(Labels(100, 1), x, "zeros");
  const ConditionReport rep = validate_conditions(d, make_prior_spec(0.5, 2, 1.0, 2),
                                                  derive_risk_spec(kClassificationLoss, 1.0, 10.0), 0.5);
  const ConditionEntry* e = rep.find("sigma");
  REQUIRE(e);
  CHECK(e->status == ConditionStatus::warn);
  INFO(e->message);
  CHECK(e->message.find("4.6599") != std::string::npos);
  CHECK_FALSE(rep.blocking());
}

TEST_CASE("eigenvalue bound blocks") {
  CHECK_THROWS_AS(make_prior_spec(0.5, 2, 20.0, 2, 10.0), ConfigError);
  CHECK_THROWS_AS(make_prior_spec(1.5, 2, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(make_prior_spec(0.5, 0, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(make_prior_spec(0.5, 3, 1.0, 2), ConfigError);
}

TEST_CASE("auto prior sits inside the size window") {
  const std::size_t n = 100000, k = 5000;
  const double delta = default_delta(n);
  const PriorSpec p = auto_prior_spec(n, k, 1.0, delta);
  const double budget = sparsity_budget(n, delta);
  CHECK(static_cast<double>(p.rbar) == std::floor(2.0 * budget));
  CHECK(p.lambda * static_cast<double>(k) == doctest::Approx(static_cast<double>(p.rbar) / 2.0));
  CHECK(p.lambda * static_cast<double>(k) >= 0.5 * budget);
}

TEST_CASE("condition report JSON lists every entry") {
  const ConditionReport rep = validate_conditions(tiny(), make_prior_spec(0.5, 2, 1.0, 2),
                                                  derive_risk_spec(kClassificationLoss, 1.0, 0.5), 0.5);
  const std::string j = rep.to_json();
  for (const char* name : {"0'", "0''", "1'", "3'", "sigma", "V", "r_delta"})
    CHECK(j.find(std::string("\"") + name + "\"") != std::string::npos);
}
