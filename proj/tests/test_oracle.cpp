#include <cmath>
#include <numeric>

#include <doctest.h>

#include "gibbsvs/generators.hpp"
#include "gibbsvs/linalg.hpp"
#include "gibbsvs/oracle.hpp"
#include "gibbsvs/prior.hpp"
#include "gibbsvs/risk.hpp"

using namespace gibbsvs;

namespace {

GeneratorSpec misspecified() {
  GeneratorSpec g;
  g.kind = GeneratorKind::misspecified_logistic;
  g.lambda = 0.125;
  return g;
}

Dataset noise_data(std::uint64_t seed, std::size_t n, std::size_t k) {
  Rng r(seed, 7);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(static_cast<Eigen::Index>(i), j) = 2 * r.uniform() - 1;
    y[i] = r.bernoulli(0.5);
  }
  return Dataset(y, x, "random");
}

}  // namespace

TEST_CASE("grid cells") {
  GridSpec g;
  CHECK(g.spacing() == doctest::Approx(0.3));
  CHECK(g.center(0) == -3.0);
  CHECK(g.center(20) == doctest::Approx(3.0));
  CHECK(g.cell_of(0.0) == 10);
  CHECK(g.cell_of(0.14) == 10);
  CHECK(g.cell_of(0.16) == 11);
  CHECK(g.cell_of(-100.0) == 0);
  CHECK(g.cell_of(100.0) == 20);
}

TEST_CASE("grid posterior sums to one and respects the guard") {
  const Dataset d = noise_data(1, 15, 3);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.0, 0.5);
  const GridPosterior post = exact_grid_posterior(d, s, make_prior_spec(0.4, 2, 1.0, 3), {});
  double total = 0, prior_total = 0;
  for (const auto& p : post.points) {
    total += p.prob;
    prior_total += p.prior_prob;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prior_total == doctest::Approx(1.0).epsilon(1e-12));
  // Sign x {anchor, anchor+1, anchor+2} x cells.
  CHECK(post.points.size() == 2 * (1 + 2 * 21));
  CHECK_THROWS_AS(exact_grid_posterior(noise_data(1, 5, 5), s, make_prior_spec(0.4, 2, 1.0, 5), {}), ConfigError);
  CHECK_THROWS_AS(post.locate(1, ModelIndicator::from_active(3, {1, 2}), Eigen::Vector2d(0, 0)), ConfigError);
}

TEST_CASE("near-zero psi returns the prior") {
  const Dataset d = noise_data(2, 20, 3);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1e-8, 0.5);
  const GridPosterior post = exact_grid_posterior(d, s, make_prior_spec(0.3, 3, 1.0, 3), {});
  CHECK(tv_to_prior(post) < 1e-3);
}

TEST_CASE("an uninformative loss returns the prior") {
  const Dataset d = noise_data(3, 20, 2);
  const RiskSpec s = derive_risk_spec({{{0.0, 1e-9}, {1e-9, 0.0}}}, 1.0, 0.5);
  const GridPosterior post = exact_grid_posterior(d, s, make_prior_spec(0.5, 2, 1.0, 2), {});
  CHECK(tv_to_prior(post) < 1e-2);
}

TEST_CASE("misspecified K = 2 mode sits on the best linear rule") {
  const Dataset d = sample(misspecified(), 20, 0);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.0, default_sigma(20));
  const GridPosterior post = exact_grid_posterior(d, s, make_prior_spec(0.5, 2, 1.0, 2), {});
  const GridPoint& m = post.points[post.mode()];
  CHECK(m.beta1 == 1);
  REQUIRE(m.cells.size() == 1);
  const double b2 = post.grid.center(m.cells[0]);
  CHECK(b2 < 0.0);
  CHECK(b2 > -1.0);
}

TEST_CASE("variational objective at the Gibbs posterior") {
  const Dataset d = noise_data(4, 12, 3);
  const RiskSpec s = derive_risk_spec(kClassificationLoss, 1.5, 0.4);
  const GridPosterior post = exact_grid_posterior(d, s, make_prior_spec(0.4, 2, 1.0, 3), {});
  std::vector<double> p, prior;
  for (const auto& g : post.points) {
    p.push_back(g.prob);
    prior.push_back(g.prior_prob);
  }
  // F(gibbs) = -psi^{-1} ln sum_c pi_c exp(-n psi R_c).
  double lse_max = -1e300;
  for (const auto& g : post.points) lse_max = std::max(lse_max, -double(post.n) * post.psi * g.risk);
  double acc = 0.0;
  for (const auto& g : post.points) acc += g.prior_prob * std::exp(-double(post.n) * post.psi * g.risk - lse_max);
  const double f_closed = -(lse_max + std::log(acc)) / post.psi;
  CHECK(variational_objective(post, p) == doctest::Approx(f_closed).epsilon(1e-10));

  const VariationalResult r = variational_check(post, 100, 3);
  CHECK(r.ok());
  CHECK(r.f_prior >= r.f_gibbs);
  CHECK(r.min_f_trial >= r.f_gibbs - 1e-9);
  CHECK(r.f_gibbs == doctest::Approx(variational_objective(post, p)));
  CHECK(r.f_prior == doctest::Approx(variational_objective(post, prior)));
  CHECK_THROWS_AS(variational_objective(post, {0.5, 0.5}), ConfigError);
}

TEST_CASE("best sparse rule on the finite sources") {
  GeneratorSpec grid;
  grid.kind = GeneratorKind::indicator_grid;
  grid.k = 10;
  SparseSearch s;
  const SparseRule a = best_sparse_rule(grid, classification_spec(), s);
  CHECK(a.risk == 0.0);
  CHECK(a.beta[0] == 1.0);

  const SparseRule b = best_sparse_rule(misspecified(), classification_spec(), s);
  CHECK(b.risk == doctest::Approx(0.125));
}

TEST_CASE("best sparse rule recovers a realizable truth") {
  auto [d, truth] = gen_sparse_linear(6, 300, 1, 1.0, 0.0, 4);
  const SparseRule r = best_sparse_rule(d, classification_spec(), {});
  CHECK(r.risk == 0.0);
  SparseSearch big;
  big.budget = 6;
  big.points = 41;
  CHECK_THROWS_AS(best_sparse_rule(d, classification_spec(), big), ConfigError);
}

TEST_CASE("logistic baseline on the misspecified source") {
  const Dataset d = sample(misspecified(), 10000, 3);
  const LogisticFit fit = logistic_mle_baseline(d);
  CHECK(fit.converged);
  // Symmetric in x: slope near 0, intercept logit(0.25).
  CHECK(std::abs(fit.coefficients[0]) < 0.1);
  CHECK(1.0 / (1.0 + std::exp(-fit.coefficients[1])) == doctest::Approx(0.25).epsilon(0.05));
  CHECK(population_risk_analytic(fit.coefficients, misspecified(), classification_spec()) == doctest::Approx(0.25));
}

TEST_CASE("logistic baseline on separable and on pure-noise data") {
  auto [sep, truth] = gen_sparse_linear(4, 500, 2, 1.0, 0.0, 8);
  const LogisticFit a = logistic_mle_baseline(sep);
  CHECK(empirical_risk_unsmoothed(a.coefficients, sep, classification_spec()) == 0.0);

  const Dataset noise = noise_data(9, 2000, 3);
  const Dataset fresh = noise_data(10, 20000, 3);
  const LogisticFit b = logistic_mle_baseline(noise);
  CHECK(std::abs(empirical_risk_unsmoothed(b.coefficients, fresh, classification_spec()) - 0.5) < 0.03);
}

TEST_CASE("explicit marginal matches a dense Gaussian density") {
  for (std::size_t dim = 0; dim <= 3; ++dim) {
    const Dataset d = noise_data(11 + dim, 7, dim + 1);
    std::vector<std::size_t> cols(dim);
    std::iota(cols.begin(), cols.end(), 1);
    const Eigen::MatrixXd xt = selected_columns(d, cols);
    const Eigen::VectorXd r = d.column(0);
    const double sigma = 0.6, v = 1.7;
    const Eigen::MatrixXd cov = sigma * sigma * Eigen::MatrixXd::Identity(7, 7) + v * xt * xt.transpose();
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double logdet = ldlt.vectorD().array().log().sum();
    const double dense = -0.5 * (7 * std::log(2 * M_PI) + logdet + r.dot(ldlt.solve(r)));
    CHECK(explicit_log_marginal(r, xt, sigma, v) == doctest::Approx(dense).epsilon(1e-10));
  }
  CHECK_THROWS_AS(explicit_log_marginal(Eigen::VectorXd::Zero(5), Eigen::MatrixXd::Zero(5, 4), 1, 1), ConfigError);
}

TEST_CASE("no-selection experiment") {
  const NoSelectionResult a = no_selection_experiment(1000, 20, 5, 2000);
  CHECK(a.bound == doctest::Approx(0.49));
  CHECK(a.ok());
  CHECK(a.estimate <= 0.5 + 3 * a.se);

  const NoSelectionResult b = no_selection_experiment(21, 20, 5, 2000);
  CHECK(b.bound == doctest::Approx(0.5 / 21));
  CHECK(b.ok());
  CHECK_THROWS_AS(no_selection_experiment(20, 20, 5, 100), ConfigError);
}
