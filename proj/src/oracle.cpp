#include "gibbsvs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gibbsvs/kernels.hpp"
#include "gibbsvs/normal.hpp"
#include "gibbsvs/prior.hpp"
#include "gibbsvs/risk.hpp"

namespace gibbsvs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double hi = kNegInf;
  for (double a : v) hi = std::max(hi, a);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double a : v) s += std::exp(a - hi);
  return hi + std::log(s);
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Cell bounds [lo, hi] on the clipped grid.
std::pair<double, double> cell_bounds(const GridSpec& g, std::size_t k) {
  const double c = g.center(k);
  const double h = 0.5 * g.spacing();
  return {std::max(-g.half_width, c - h), std::min(g.half_width, c + h)};
}

double gaussian_mass(double lo, double hi, double v) {
  const double s = std::sqrt(v);
  // Use the upper tail on the right half so the difference keeps precision.
  if (lo >= 0.0) return norm_cdf(-lo / s) - norm_cdf(-hi / s);
  return norm_cdf(hi / s) - norm_cdf(lo / s);
}

}  // namespace

std::size_t GridSpec::cell_of(double b) const {
  const double k = std::round((b + half_width) / spacing());
  if (!(k > 0.0)) return 0;
  return std::min(points - 1, static_cast<std::size_t>(k));
}

std::size_t GridPosterior::locate(int beta1, const ModelIndicator& indicator, const Eigen::VectorXd& active) const {
  const auto it = std::find(models_.begin(), models_.end(), indicator.bits());
  if (it == models_.end()) throw ConfigError("grid posterior: model outside the enumerated set");
  const std::size_t model = static_cast<std::size_t>(it - models_.begin());
  const std::size_t sign = beta1 > 0 ? 0 : 1;
  std::size_t idx = offsets_[sign * models_.size() + model];
  std::size_t stride = 1;
  for (Eigen::Index t = 0; t < active.size(); ++t) {
    idx += stride * grid.cell_of(active[t]);
    stride *= grid.points;
  }
  return idx;
}

std::size_t GridPosterior::mode() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].prob > points[best].prob) best = i;
  return best;
}

GridPosterior exact_grid_posterior(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                                   const GridSpec& grid, RiskKind kind) {
  const std::size_t k = data.k();
  if (k > 4 || prior.rbar > 3 || grid.points > 41)
    throw ConfigError("grid posterior: guard K <= 4, rbar <= 3, g <= 41 violated");
  if (grid.points < 2 || grid.subdivisions < 1 || !(grid.half_width > 0.0))
    throw ConfigError("grid posterior: need g >= 2, subdivisions >= 1, G > 0");
  if (prior.k != k) throw ConfigError("grid posterior: prior K does not match the dataset");

  GridPosterior post;
  post.grid = grid;
  post.kind = kind;
  post.n = data.n();
  post.psi = risk.psi;

  // Models in increasing bit-pattern order.
  for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
    std::vector<std::uint8_t> bits(k, 0);
    bits[0] = 1;
    std::size_t size = 1;
    for (std::size_t j = 1; j < k; ++j)
      if (mask >> (j - 1) & 1u) {
        bits[j] = 1;
        ++size;
      }
    if (size <= prior.rbar) post.models_.push_back(std::move(bits));
  }

  const std::size_t g = grid.points;
  const std::size_t sub = grid.subdivisions;
  std::vector<double> log_cell(g);
  std::vector<std::vector<double>> sub_points(g), log_sub_frac(g);
  for (std::size_t c = 0; c < g; ++c) {
    const auto [lo, hi] = cell_bounds(grid, c);
    const double mass = gaussian_mass(lo, hi, prior.v);
    log_cell[c] = std::log(mass);
    if (sub == 1) {
      sub_points[c] = {grid.center(c)};
      log_sub_frac[c] = {0.0};
      continue;
    }
    const double w = (hi - lo) / static_cast<double>(sub);
    for (std::size_t s = 0; s < sub; ++s) {
      const double a = lo + w * static_cast<double>(s);
      sub_points[c].push_back(a + 0.5 * w);
      log_sub_frac[c].push_back(std::log(gaussian_mass(a, a + w, prior.v)) - log_cell[c]);
    }
  }

  for (int sign : {1, -1}) {
    for (const auto& bits : post.models_) {
      post.offsets_.push_back(post.points.size());
      ModelIndicator ind(bits);
      const auto active = ind.active();
      const std::size_t d = active.size();
      const double lp_model = log_prior_model(ind, prior) + std::log(0.5);
      for (std::size_t flat = 0; flat < ipow(g, d); ++flat) {
        GridPoint p;
        p.beta1 = sign;
        p.bits = bits;
        std::size_t rest = flat;
        double lp = lp_model;
        for (std::size_t t = 0; t < d; ++t) {
          p.cells.push_back(static_cast<std::uint32_t>(rest % g));
          rest /= g;
          lp += log_cell[p.cells.back()];
        }
        p.prior_prob = lp;  // log for now
        post.points.push_back(std::move(p));
      }
    }
  }

  // Likelihood integral per point; points are independent.
  const double npsi = static_cast<double>(data.n()) * risk.psi;
  const auto count = static_cast<std::ptrdiff_t>(post.points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    GridPoint& p = post.points[static_cast<std::size_t>(i)];
    const std::size_t d = p.cells.size();
    ModelIndicator ind(p.bits);
    const auto active = ind.active();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.k()));
    beta[0] = p.beta1;
    std::vector<double> terms;
    terms.reserve(ipow(sub, d));
    for (std::size_t flat = 0; flat < ipow(sub, d); ++flat) {
      std::size_t rest = flat;
      double lw = 0.0;
      for (std::size_t t = 0; t < d; ++t) {
        const std::size_t s = rest % sub;
        rest /= sub;
        beta[static_cast<Eigen::Index>(active[t])] = sub_points[p.cells[t]][s];
        lw += log_sub_frac[p.cells[t]][s];
      }
      const double r = kind == RiskKind::smoothed ? sample_risk_smoothed(beta, data, risk)
                                                  : empirical_risk_unsmoothed(beta, data, risk);
      terms.push_back(lw - npsi * r);
    }
    p.risk = -log_sum_exp(terms) / npsi;
  }

  std::vector<double> lw(post.points.size()), lp(post.points.size());
  for (std::size_t i = 0; i < post.points.size(); ++i) {
    lp[i] = post.points[i].prior_prob;
    lw[i] = lp[i] - npsi * post.points[i].risk;
  }
  const double zw = log_sum_exp(lw);
  const double zp = log_sum_exp(lp);
  for (std::size_t i = 0; i < post.points.size(); ++i) {
    post.points[i].prob = std::exp(lw[i] - zw);
    post.points[i].prior_prob = std::exp(lp[i] - zp);
  }
  return post;
}

double tv_distance(const GridPosterior& post, const std::vector<Draw>& draws) {
  if (draws.empty()) throw ConfigError("tv distance: no draws");
  std::vector<double> freq(post.points.size(), 0.0);
  for (const auto& d : draws) freq[post.locate(d)] += 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i)
    tv += std::abs(freq[i] / static_cast<double>(draws.size()) - post.points[i].prob);
  return 0.5 * tv;
}

double tv_to_prior(const GridPosterior& post) {
  double tv = 0.0;
  for (const auto& p : post.points) tv += std::abs(p.prob - p.prior_prob);
  return 0.5 * tv;
}

double variational_objective(const GridPosterior& post, const std::vector<double>& p) {
  if (p.size() != post.points.size()) throw ConfigError("variational objective: length mismatch");
  const double n = static_cast<double>(post.n);
  double risk_term = 0.0, kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    risk_term += p[i] * n * post.points[i].risk;
    kl += p[i] * std::log(p[i] / post.points[i].prior_prob);
  }
  return risk_term + kl / post.psi;
}

VariationalResult variational_check(const GridPosterior& post, std::size_t trials, std::uint64_t seed, double tol) {
  const std::size_t m = post.points.size();
  std::vector<double> gibbs(m), prior(m);
  for (std::size_t i = 0; i < m; ++i) {
    gibbs[i] = post.points[i].prob;
    prior[i] = post.points[i].prior_prob;
  }
  VariationalResult res;
  res.f_gibbs = variational_objective(post, gibbs);
  res.f_prior = variational_objective(post, prior);
  res.min_f_trial = res.f_prior;
  if (res.f_gibbs > res.f_prior + tol) ++res.violations;

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, stream_id(0, t, StreamTag::evaluation));
    // Alternate between far (pure Dirichlet) and near (small mixture) trials.
    const double conc = std::pow(10.0, 1.0 + 3.0 * rng.uniform());
    std::vector<double> q(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      std::gamma_distribution<double> gam(conc * gibbs[i] + 0.01, 1.0);
      q[i] = gam(rng.engine());
      total += q[i];
    }
    for (double& a : q) a /= total;
    if (t % 2 == 1) {
      const double mix = 0.1 * rng.uniform();
      for (std::size_t i = 0; i < m; ++i) q[i] = (1.0 - mix) * gibbs[i] + mix * q[i];
    }
    const double f = variational_objective(post, q);
    res.min_f_trial = std::min(res.min_f_trial, f);
    if (res.f_gibbs > f + tol) ++res.violations;
    ++res.trials;
  }
  return res;
}

namespace {

// Visits every (support, sign, grid point) in a fixed order and keeps the
// first minimizer. `eval(sign, support, values)` returns the risk.
template <class Eval>
SparseRule search_supports(std::size_t k, const SparseSearch& s, Eval eval) {
  if (s.points < 1) throw ConfigError("sparse search: need at least one grid point");
  std::vector<std::size_t> cand = s.candidates;
  if (cand.empty())
    for (std::size_t j = 1; j < k; ++j) cand.push_back(j);
  for (std::size_t j : cand)
    if (j == 0 || j >= k) throw ConfigError("sparse search: candidate out of range");
  const std::size_t budget = std::min(s.budget, cand.size());
  if (binomial(cand.size(), budget) * std::pow(static_cast<double>(s.points), static_cast<double>(budget)) > 1e7)
    throw ConfigError("sparse search: C(K, s) g^s exceeds 1e7");

  std::vector<double> values(s.points);
  for (std::size_t i = 0; i < s.points; ++i)
    values[i] = s.points == 1 ? 0.0
                              : -s.half_width + 2.0 * s.half_width * static_cast<double>(i) /
                                                    static_cast<double>(s.points - 1);

  SparseRule best;
  best.risk = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r <= budget; ++r) {
    // Lexicographic r-subsets of the candidate list.
    std::vector<std::size_t> pick(r);
    for (std::size_t i = 0; i < r; ++i) pick[i] = i;
    for (;;) {
      std::vector<std::size_t> support(r);
      for (std::size_t i = 0; i < r; ++i) support[i] = cand[pick[i]];
      const std::size_t combos = ipow(s.points, r);
      std::vector<double> risks(2 * combos);
#pragma omp parallel for schedule(static) if (combos >= 64)
      for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(2 * combos); ++f) {
        const auto ff = static_cast<std::size_t>(f);
        const int sign = ff < combos ? 1 : -1;
        std::size_t rest = ff % combos;
        std::vector<double> v(r);
        for (std::size_t t = 0; t < r; ++t) {
          v[t] = values[rest % s.points];
          rest /= s.points;
        }
        risks[ff] = eval(sign, support, v);
      }
      for (std::size_t f = 0; f < 2 * combos; ++f) {
        ++best.evaluated;
        if (risks[f] < best.risk) {
          best.risk = risks[f];
          best.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
          best.beta[0] = f < combos ? 1.0 : -1.0;
          std::size_t rest = f % combos;
          for (std::size_t t = 0; t < r; ++t) {
            best.beta[static_cast<Eigen::Index>(support[t])] = values[rest % s.points];
            rest /= s.points;
          }
        }
      }
      // Next subset.
      std::size_t i = r;
      while (i > 0 && pick[i - 1] == cand.size() - r + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t t = i; t < r; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  return best;
}

}  // namespace

SparseRule best_sparse_rule(const std::function<double(const Eigen::VectorXd&)>& risk_of, std::size_t k,
                            const SparseSearch& search) {
  return search_supports(k, search, [&](int sign, const std::vector<std::size_t>& support,
                                        const std::vector<double>& v) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    b[0] = sign;
    for (std::size_t t = 0; t < support.size(); ++t) b[static_cast<Eigen::Index>(support[t])] = v[t];
    return risk_of(b);
  });
}

SparseRule best_sparse_rule(const Dataset& data, const RiskSpec& spec, const SparseSearch& search) {
  const Eigen::MatrixXd& x = data.features();
  return search_supports(data.k(), search, [&](int sign, const std::vector<std::size_t>& support,
                                               const std::vector<double>& v) {
    Eigen::VectorXd m = static_cast<double>(sign) * x.col(0);
    for (std::size_t t = 0; t < support.size(); ++t) m += v[t] * x.col(static_cast<Eigen::Index>(support[t]));
    return kernels::serial::loss_sum(m, data.labels(), spec) / static_cast<double>(data.n());
  });
}

SparseRule best_sparse_rule(const GeneratorSpec& gen, const RiskSpec& spec, const SparseSearch& search) {
  return best_sparse_rule([&](const Eigen::VectorXd& b) { return population_risk_analytic(b, gen, spec); },
                          gen.feature_count(), search);
}

LogisticFit logistic_mle_baseline(const Dataset& data) {
  constexpr double kRidge = 1e-8;
  const Eigen::MatrixXd& x = data.features();
  const auto n = static_cast<Eigen::Index>(data.n());
  const Eigen::Index k = x.cols();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = data.label(static_cast<std::size_t>(i));

  LogisticFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(k);
  for (std::size_t it = 0; it < 100; ++it) {
    const Eigen::VectorXd eta = x * fit.coefficients;
    Eigen::VectorXd p(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p[i] = eta[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-eta[i])) : std::exp(eta[i]) / (1.0 + std::exp(eta[i]));
      w[i] = p[i] * (1.0 - p[i]);
    }
    const Eigen::VectorXd grad = x.transpose() * (y - p) - kRidge * fit.coefficients;
    Eigen::MatrixXd h = x.transpose() * w.asDiagonal() * x;
    h.diagonal().array() += kRidge;
    const Eigen::VectorXd step = h.ldlt().solve(grad);
    fit.iterations = it + 1;
    if (!step.allFinite()) break;
    fit.coefficients += step;
    if (step.lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + fit.coefficients.lpNorm<Eigen::Infinity>())) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

namespace {

// Determinant and adjugate of a d x d matrix, d <= 3, by cofactors.
double cofactor_inverse(const Eigen::MatrixXd& a, Eigen::MatrixXd& inv) {
  const Eigen::Index d = a.rows();
  inv.resize(d, d);
  if (d == 0) return 1.0;
  if (d == 1) {
    inv(0, 0) = 1.0 / a(0, 0);
    return a(0, 0);
  }
  if (d == 2) {
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
    inv /= det;
    return det;
  }
  Eigen::MatrixXd cof(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      cof(i, j) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    }
  const double det = a(0, 0) * cof(0, 0) + a(0, 1) * cof(0, 1) + a(0, 2) * cof(0, 2);
  inv = cof.transpose() / det;
  return det;
}

}  // namespace

double explicit_log_marginal(const Eigen::VectorXd& r, const Eigen::MatrixXd& xt, double sigma, double v) {
  const Eigen::Index d = xt.cols();
  if (d > 3) throw ConfigError("explicit marginal: d must be <= 3");
  const double s2 = sigma * sigma;
  const auto n = static_cast<double>(r.size());
  Eigen::MatrixXd a = xt.transpose() * xt / s2;
  a.diagonal().array() += 1.0 / v;
  Eigen::MatrixXd inv;
  const double det = cofactor_inverse(a, inv);
  const Eigen::VectorXd c = xt.transpose() * r / s2;
  const double quad = d > 0 ? c.dot(inv * c) : 0.0;
  return -0.5 * n * std::log(2.0 * M_PI * s2) - 0.5 * static_cast<double>(d) * std::log(v) - 0.5 * std::log(det) -
         0.5 * r.squaredNorm() / s2 + 0.5 * quad;
}

NoSelectionResult no_selection_experiment(std::size_t k, std::size_t n, std::uint64_t seed, std::size_t draws) {
  if (k <= n) throw ConfigError("no-selection experiment: need K > n");
  if (draws < 2) throw ConfigError("no-selection experiment: need at least two draws");
  GeneratorSpec gen;
  gen.kind = GeneratorKind::indicator_grid;
  gen.k = k;
  gen.seed = seed;
  const RiskSpec& spec = classification_spec();

  std::vector<double> risks(draws);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(draws); ++d) {
    const auto dd = static_cast<std::size_t>(d);
    const Dataset data = sample(gen, n, dd);
    Rng rng(seed, stream_id(0, dd, StreamTag::prior));
    Eigen::VectorXd beta(static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < beta.size(); ++j) beta[j] = rng.normal();
    // Observed coordinates take the perfect rule's value.
    for (Eigen::Index j = 0; j < beta.size(); ++j)
      if (data.column(static_cast<std::size_t>(j)).maxCoeff() > 0.0) beta[j] = j == 0 ? 1.0 : 0.0;
    risks[dd] = population_risk_analytic(beta, gen, spec);
  }
  double s = 0.0, s2 = 0.0;
  for (double r : risks) {
    s += r;
    s2 += r * r;
  }
  const double dn = static_cast<double>(draws);
  NoSelectionResult res;
  res.estimate = s / dn;
  res.se = std::sqrt(std::max(0.0, (s2 - dn * res.estimate * res.estimate) / (dn - 1.0)) / dn);
  res.bound = 0.5 * (1.0 - static_cast<double>(n) / static_cast<double>(k));
  res.draws = draws;
  return res;
}

}  // namespace gibbsvs
