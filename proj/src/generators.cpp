#include "gibbsvs/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gibbsvs/rng.hpp"

namespace gibbsvs {

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::misspecified_logistic: return "misspecified-logistic";
    case GeneratorKind::indicator_grid: return "indicator-grid";
    case GeneratorKind::sparse_linear: return "sparse-linear";
    case GeneratorKind::file: return "file";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (auto k : {GeneratorKind::misspecified_logistic, GeneratorKind::indicator_grid,
                 GeneratorKind::sparse_linear, GeneratorKind::file})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown generator kind '" + name + "'");
}

bool GeneratorSpec::declares_condition_0pp() const {
  // Only the continuous-feature source has a bounded anchor density.
  return kind == GeneratorKind::sparse_linear;
}

bool GeneratorSpec::finite_support() const {
  return kind == GeneratorKind::misspecified_logistic || kind == GeneratorKind::indicator_grid;
}

std::size_t GeneratorSpec::feature_count() const {
  return kind == GeneratorKind::misspecified_logistic ? 2 : k;
}

void validate(const GeneratorSpec& s) {
  switch (s.kind) {
    case GeneratorKind::misspecified_logistic:
      if (!(s.lambda > 0.0 && s.lambda < 0.25))
        throw ConfigError("misspecified-logistic: lambda must lie in (0, 0.25)");
      break;
    case GeneratorKind::indicator_grid:
      if (s.k < 2) throw ConfigError("indicator-grid: K must be at least 2");
      break;
    case GeneratorKind::sparse_linear:
      if (s.k < 2) throw ConfigError("sparse-linear: K must be at least 2");
      if (s.support >= s.k) throw ConfigError("sparse-linear: support must be < K");
      if (!(s.noise >= 0.0 && s.noise < 0.5))
        throw ConfigError("sparse-linear: noise must lie in [0, 0.5)");
      if (!(s.coef_scale > 0.0) || !std::isfinite(s.coef_scale))
        throw ConfigError("sparse-linear: coef_scale must be positive");
      break;
    case GeneratorKind::file:
      if (s.path.empty()) throw ConfigError("file source: path is empty");
      break;
  }
}

namespace {

Rng row_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(seed, stream_id(0, stream, StreamTag::generator));
}

Dataset misspecified_rows(double lambda, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  Rng rng = row_rng(seed, stream);
  Labels y(n);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double xi = u < lambda ? -1.0 : (u < 2.0 * lambda ? 1.0 : 0.0);
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = xi;
    x(r, 1) = 1.0;
    y[i] = xi != 0.0 ? 1 : 0;
  }
  std::ostringstream prov;
  prov << "misspecified-logistic(lambda=" << lambda << ", seed=" << seed << ", stream=" << stream << ")";
  return Dataset(std::move(y), std::move(x), prov.str(), false);
}

Dataset grid_rows(std::size_t k, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  Rng rng = row_rng(seed, stream);
  Labels y(n);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t level = rng.below(k) + 1;  // z = level / K
    x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - level)) = 1.0;
    y[i] = level == k ? 1 : 0;
  }
  std::ostringstream prov;
  prov << "indicator-grid(K=" << k << ", seed=" << seed << ", stream=" << stream << ")";
  return Dataset(std::move(y), std::move(x), prov.str(), false);
}

Dataset sparse_rows(const Eigen::VectorXd& beta, double noise, std::size_t n, std::uint64_t seed,
                    std::uint64_t stream) {
  Rng rng = row_rng(seed, stream);
  const auto k = beta.size();
  Labels y(n);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < k; ++j) x(r, j) = 2.0 * rng.uniform() - 1.0;
    int label = x.row(r).dot(beta) > 0.0 ? 1 : 0;
    if (rng.uniform() < noise) label = 1 - label;
    y[i] = static_cast<std::uint8_t>(label);
  }
  std::ostringstream prov;
  prov << "sparse-linear(K=" << k << ", noise=" << noise << ", seed=" << seed << ", stream=" << stream << ")";
  return Dataset(std::move(y), std::move(x), prov.str(), true);
}

}  // namespace

Dataset sample(const GeneratorSpec& spec, std::size_t n, std::uint64_t stream) {
  validate(spec);
  switch (spec.kind) {
    case GeneratorKind::misspecified_logistic:
      return misspecified_rows(spec.lambda, n, spec.seed, stream);
    case GeneratorKind::indicator_grid:
      return grid_rows(spec.k, n, spec.seed, stream);
    case GeneratorKind::sparse_linear:
      return sparse_rows(sparse_linear_truth(spec.k, spec.support, spec.coef_scale, spec.seed),
                         spec.noise, n, spec.seed, stream);
    case GeneratorKind::file:
      return ingest_csv(spec.path, spec.label_column, spec.anchor_column);
  }
  throw ConfigError("unknown generator");
}

Dataset gen_misspecified_logistic(double lambda, std::size_t n, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::misspecified_logistic;
  s.lambda = lambda;
  s.seed = seed;
  return sample(s, n);
}

Dataset gen_indicator_grid(std::size_t k, std::size_t n, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::indicator_grid;
  s.k = k;
  s.seed = seed;
  return sample(s, n);
}

Eigen::VectorXd sparse_linear_truth(std::size_t k, std::size_t support, double coef_scale,
                                    std::uint64_t seed) {
  if (k < 2 || support >= k) throw ConfigError("sparse-linear: need K >= 2 and support < K");
  Rng rng(seed, stream_id(0, 0, StreamTag::prior));
  std::vector<std::size_t> pool(k - 1);
  std::iota(pool.begin(), pool.end(), std::size_t{1});
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  beta[0] = 1.0;
  for (std::size_t t = 0; t < support; ++t) {
    const std::size_t pick = t + rng.below(pool.size() - t);
    std::swap(pool[t], pool[pick]);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    beta[static_cast<Eigen::Index>(pool[t])] = sign * coef_scale;
  }
  return beta;
}

std::pair<Dataset, Eigen::VectorXd> gen_sparse_linear(std::size_t k, std::size_t n,
                                                      std::size_t support, double coef_scale,
                                                      double noise, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::sparse_linear;
  s.k = k;
  s.support = support;
  s.coef_scale = coef_scale;
  s.noise = noise;
  s.seed = seed;
  validate(s);
  Eigen::VectorXd beta = sparse_linear_truth(k, support, coef_scale, seed);
  return {sparse_rows(beta, noise, n, seed, 0), beta};
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("csv: non-numeric cell '" + cell + "' at line " + std::to_string(line) +
                      ", column '" + column + "'");
  return v;
}

}  // namespace

Dataset ingest_csv(const std::string& path, const std::string& label_column,
                   const std::string& anchor_column) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw ConfigError("csv: empty file '" + path + "'");
  const auto header = split_csv(line);

  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw ConfigError("csv: no label column '" + label_column + "'");
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::size_t> feature_pos;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_pos) feature_pos.push_back(c);
  if (feature_pos.empty()) throw ConfigError("csv: no feature columns");
  if (!anchor_column.empty()) {
    auto it = std::find_if(feature_pos.begin(), feature_pos.end(),
                           [&](std::size_t c) { return header[c] == anchor_column; });
    if (it == feature_pos.end()) throw ConfigError("csv: no anchor column '" + anchor_column + "'");
    std::rotate(feature_pos.begin(), it, it + 1);
  }

  std::vector<std::vector<double>> rows;
  Labels labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ConfigError("csv: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(header.size()));
    const double y = parse_cell(cells[label_pos], lineno, label_column);
    if (y != 0.0 && y != 1.0)
      throw ConfigError("csv: non-binary label at line " + std::to_string(lineno));
    labels.push_back(static_cast<std::uint8_t>(y));
    std::vector<double> r;
    r.reserve(feature_pos.size());
    for (auto c : feature_pos) r.push_back(parse_cell(cells[c], lineno, header[c]));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ConfigError("csv: no data rows in '" + path + "'");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(feature_pos.size());
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  std::ostringstream prov;
  prov.precision(17);
  prov << "csv:" << path << " maps:";
  for (Eigen::Index j = 0; j < k; ++j) {
    const double lo = x.col(j).minCoeff();
    const double hi = x.col(j).maxCoeff();
    double scale = 0.0, shift = 0.0;
    if (hi > lo) {
      scale = 2.0 / (hi - lo);
      shift = -1.0 - lo * scale;
    }
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = std::clamp(scale * x(i, j) + shift, -1.0, 1.0);
    prov << ' ' << header[feature_pos[static_cast<std::size_t>(j)]] << "=" << scale << "*x+" << shift;
  }
  return Dataset(std::move(labels), std::move(x), prov.str(), false);
}

}  // namespace gibbsvs
