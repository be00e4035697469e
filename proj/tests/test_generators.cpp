#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "gibbsvs/generators.hpp"
#include "gibbsvs/risk.hpp"
#include "gibbsvs/sparse_families.hpp"

using namespace gibbsvs;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("misspecified-logistic frequencies and labels") {
  const std::size_t n = 200000;
  const Dataset d = gen_misspecified_logistic(0.125, n, 3);
  REQUIRE(d.k() == 2);
  double neg = 0, pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = d.features()(static_cast<Eigen::Index>(i), 0);
    CHECK(d.features()(static_cast<Eigen::Index>(i), 1) == 1.0);
    CHECK(d.label(i) == (x != 0.0 ? 1 : 0));
    neg += x == -1.0;
    pos += x == 1.0;
  }
  const double se = std::sqrt(0.125 * 0.875 / n);
  CHECK(std::abs(neg / n - 0.125) < 4 * se);
  CHECK(std::abs(pos / n - 0.125) < 4 * se);
  CHECK(d.features_bounded());
}

TEST_CASE("indicator-grid rows are one-hot") {
  const std::size_t k = 10, n = 5000;
  const Dataset d = gen_indicator_grid(k, n, 4);
  REQUIRE(d.k() == k);
  std::vector<double> counts(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = d.features().row(static_cast<Eigen::Index>(i));
    CHECK(row.sum() == 1.0);
    Eigen::Index hot;
    row.maxCoeff(&hot);
    counts[static_cast<std::size_t>(hot)] += 1;
    // z = 1 sits in the anchor column.
    CHECK(d.label(i) == (hot == 0 ? 1 : 0));
  }
  for (double c : counts) CHECK(std::abs(c / n - 0.1) < 4 * std::sqrt(0.09 / n));
}

TEST_CASE("sparse-linear: noiseless truth has zero risk") {
  auto [d, truth] = gen_sparse_linear(30, 2000, 4, 1.0, 0.0, 5);
  CHECK(truth[0] == 1.0);
  std::size_t nz = 0;
  for (Eigen::Index j = 1; j < truth.size(); ++j) nz += truth[j] != 0.0;
  CHECK(nz == 4);
  CHECK(empirical_risk_unsmoothed(truth, d, classification_spec()) == 0.0);
  CHECK(d.features_bounded());
  CHECK(sparse_linear_truth(30, 4, 1.0, 5) == truth);
}

TEST_CASE("sparse-linear: label noise sets the Bayes risk") {
  GeneratorSpec g;
  g.kind = GeneratorKind::sparse_linear;
  g.k = 20;
  g.support = 3;
  g.noise = 0.1;
  g.seed = 6;
  const Eigen::VectorXd truth = sparse_linear_truth(20, 3, 1.0, 6);
  const RiskEstimate e = population_risk_mc(truth, g, 200000, 9, classification_spec());
  CHECK(std::abs(e.mean - 0.1) < 4 * e.se);
}

TEST_CASE("sparse-linear truth lies in the sparse family") {
  const std::size_t n = 1000000;
  FamilySpec f;
  f.family = Family::Hb;
  f.n = n;
  f.delta_n = std::pow(std::log(double(n)), 2) / std::sqrt(double(n));
  f.c = 1.0;
  CHECK(is_member(sparse_linear_truth(100, 5, 1.0, 1), f));
}

TEST_CASE("independent streams give different samples") {
  GeneratorSpec g;
  g.kind = GeneratorKind::sparse_linear;
  g.k = 5;
  g.support = 2;
  g.seed = 1;
  CHECK(sample(g, 50, 0).features() != sample(g, 50, 1).features());
  CHECK(sample(g, 50, 0).features() == sample(g, 50, 0).features());
}

TEST_CASE("generator validation") {
  GeneratorSpec g;
  g.lambda = 0.3;
  CHECK_THROWS_AS(validate(g), ConfigError);
  CHECK(parse_generator_kind("indicator-grid") == GeneratorKind::indicator_grid);
  CHECK_THROWS_AS(parse_generator_kind("gaussian"), ConfigError);
  g = {};
  CHECK(g.declares_condition_0pp() == false);
  CHECK(g.finite_support());
}

TEST_CASE("CSV ingest rescales columns onto [-1, 1]") {
  const std::string path = write_temp("gibbsvs_ingest.csv", "a,y,b,c\n2,1,5,0.5\n4,0,5,1.5\n6,1,5,-0.5\n");
  const Dataset d = ingest_csv(path, "y");
  REQUIRE(d.n() == 3);
  REQUIRE(d.k() == 3);
  CHECK(d.features()(0, 0) == -1.0);
  CHECK(d.features()(1, 0) == 0.0);
  CHECK(d.features()(2, 0) == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(d.features()(i, 1) == 0.0);
  CHECK(d.features().cwiseAbs().maxCoeff() <= 1.0);
  CHECK(d.labels() == Labels{1, 0, 1});

  const Dataset e = ingest_csv(path, "y", "c");
  CHECK(e.features()(0, 0) == doctest::Approx(0.0));
  CHECK(e.features()(1, 0) == 1.0);
}

TEST_CASE("CSV ingest rejects bad input") {
  CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv", "y"), ConfigError);
  CHECK_THROWS_AS(ingest_csv(write_temp("gibbsvs_nolabel.csv", "a,b\n1,2\n"), "y"), ConfigError);
  CHECK_THROWS_AS(ingest_csv(write_temp("gibbsvs_badlabel.csv", "a,y\n1,2\n"), "y"), ConfigError);
  CHECK_THROWS_AS(ingest_csv(write_temp("gibbsvs_ragged.csv", "a,y\n1,0\n1\n"), "y"), ConfigError);
}
