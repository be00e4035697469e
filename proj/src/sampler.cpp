#include "gibbsvs/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "gibbsvs/linalg.hpp"
#include "gibbsvs/normal.hpp"
#include "gibbsvs/prior.hpp"

namespace gibbsvs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using kernels::LatentMechanism;

void check_inputs(const Dataset& data, const PriorSpec& prior) {
  if (data.k() != prior.k) throw ConfigError("sampler: dataset K does not match prior K");
  if (prior.rbar < 1 || prior.rbar > prior.k) throw ConfigError("sampler: invalid size cap");
}

// Linear predictor through the sparse kernel.
Eigen::VectorXd predictor(const Dataset& data, const ModelIndicator& ind, const Coefficients& c) {
  const auto cols = ind.active();
  std::vector<double> vals(c.active.data(), c.active.data() + c.active.size());
  kernels::SparseBeta sb{static_cast<double>(c.beta1), cols, vals};
  Eigen::VectorXd m;
  kernels::omp::linear_predictor(data.features(), sb, m);
  return m;
}

double smoothed_risk_from_predictor(const Eigen::VectorXd& m, const Dataset& data, const RiskSpec& risk) {
  return -kernels::omp::smoothed_log_likelihood(m, data.labels(), risk) /
         (static_cast<double>(data.n()) * risk.psi);
}

// Z(beta1) = Z - x_1 beta1.
Eigen::VectorXd shifted_latent(const Eigen::VectorXd& z, const Dataset& data, int beta1) {
  return z - static_cast<double>(beta1) * data.column(Dataset::anchor_index);
}

// Quadratic form b^T S^{-1} b and log-det term for a column set.
struct BranchTerms {
  double quad = 0.0;
  double log_det_term = 0.0;
};

// Gram, cross-products and factor for the current active set. Candidate
// branches are evaluated by bordering or deleting one row/column of S and
// refactorizing; the current set itself is refactorized only on a flip.
class ActiveSet {
 public:
  ActiveSet(const Dataset& data, double sigma, double v) : data_(data), sigma_(sigma), v_(v) {}

  void reset(const std::vector<std::size_t>& cols, const Eigen::VectorXd& r) {
    cols_ = cols;
    xt_ = selected_columns(data_, cols_);
    s_ = sgamma_matrix(xt_.transpose() * xt_, sigma_, v_);
    b_ = xt_.transpose() * r;
    factor_ = SpdFactor::factorize(s_);
  }

  const std::vector<std::size_t>& cols() const { return cols_; }
  const SpdFactor& factor() const { return factor_; }
  const Eigen::VectorXd& b() const { return b_; }

  BranchTerms current() const { return {factor_.quadratic_form(b_), log_det_ratio_term(factor_, sigma_, v_)}; }

  BranchTerms with_added(std::size_t j, const Eigen::VectorXd& r) const {
    const auto d = static_cast<Eigen::Index>(cols_.size());
    const auto xj = data_.column(j);
    Eigen::MatrixXd s(d + 1, d + 1);
    s.topLeftCorner(d, d) = s_;
    const Eigen::VectorXd g = xt_.transpose() * xj;
    s.topRightCorner(d, 1) = g;
    s.bottomLeftCorner(1, d) = g.transpose();
    s(d, d) = xj.squaredNorm() + sigma_ * sigma_ / v_;
    Eigen::VectorXd b(d + 1);
    b.head(d) = b_;
    b[d] = xj.dot(r);
    const SpdFactor f = SpdFactor::factorize(s);
    return {f.quadratic_form(b), log_det_ratio_term(f, sigma_, v_)};
  }

  BranchTerms with_removed(std::size_t j) const {
    const auto it = std::lower_bound(cols_.begin(), cols_.end(), j);
    const auto p = static_cast<Eigen::Index>(it - cols_.begin());
    const auto d = static_cast<Eigen::Index>(cols_.size());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < d; ++t)
      if (t != p) keep.push_back(t);
    const Eigen::MatrixXd s = s_(keep, keep);
    const Eigen::VectorXd b = b_(keep);
    const SpdFactor f = SpdFactor::factorize(s);
    return {f.quadratic_form(b), log_det_ratio_term(f, sigma_, v_)};
  }

 private:
  const Dataset& data_;
  double sigma_;
  double v_;
  std::vector<std::size_t> cols_;
  Eigen::MatrixXd xt_;
  Eigen::MatrixXd s_;
  Eigen::VectorXd b_;
  SpdFactor factor_;
};

std::pair<double, double> branch_weights(const ActiveSet& set, const ModelIndicator& ind, std::size_t j,
                                         const Eigen::VectorXd& r, const PriorSpec& prior, double sigma) {
  const bool on = ind.test(j);
  const BranchTerms cur = set.current();
  const BranchTerms alt = on ? set.with_removed(j) : set.with_added(j, r);
  const BranchTerms& t1 = on ? cur : alt;
  const BranchTerms& t0 = on ? alt : cur;
  const double s2 = sigma * sigma;
  const std::size_t size_on = ind.size() + (on ? 0 : 1);
  double w1 = log_bernoulli(prior.lambda, true) + 0.5 * t1.quad / s2 + t1.log_det_term;
  const double w0 = log_bernoulli(prior.lambda, false) + 0.5 * t0.quad / s2 + t0.log_det_term;
  if (size_on > prior.rbar) w1 = kNegInf;
  return {w0, w1};
}

// P(bit = 1) from log-weights, with max subtraction.
double prob_one(double w0, double w1) {
  if (w1 == kNegInf) return 0.0;
  if (w0 == kNegInf) return 1.0;
  return 1.0 / (1.0 + std::exp(w0 - w1));
}

std::vector<std::size_t> scan_order(std::size_t k, ScanOrder mode, std::uint64_t seed, std::uint32_t chain,
                                    std::uint64_t it) {
  std::vector<std::size_t> order(k - 1);
  std::iota(order.begin(), order.end(), std::size_t{1});
  if (mode == ScanOrder::random_permutation && order.size() > 1) {
    Rng rng(seed, stream_id(chain, it, StreamTag::scan_order));
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  }
  return order;
}

struct Recorder {
  const SamplerConfig& cfg;
  ChainOutput out;

  explicit Recorder(const SamplerConfig& c) : cfg(c) {
    out.config = c;
    out.model_size.reserve(c.iterations);
    out.risk_smoothed.reserve(c.iterations);
    out.beta1.reserve(c.iterations);
    out.accepted_moves.reserve(c.iterations);
    out.proposed_moves.reserve(c.iterations);
  }

  void record(std::uint64_t t, const ModelIndicator& ind, const Coefficients& c, double rn, std::uint32_t acc,
              std::uint32_t prop) {
    out.model_size.push_back(static_cast<std::uint32_t>(ind.size()));
    out.risk_smoothed.push_back(rn);
    out.beta1.push_back(c.beta1);
    out.accepted_moves.push_back(acc);
    out.proposed_moves.push_back(prop);
    if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) out.draws.push_back({ind, c});
  }
};

}  // namespace

const char* to_string(ScanOrder s) { return s == ScanOrder::systematic ? "systematic" : "random-permutation"; }
const char* to_string(Backend b) { return b == Backend::gibbs ? "gibbs" : "metropolis"; }
const char* to_string(LatentMechanism m) { return m == LatentMechanism::exact_mixture ? "exact-mixture" : "rejection"; }

ScanOrder parse_scan_order(const std::string& s) {
  if (s == "systematic") return ScanOrder::systematic;
  if (s == "random-permutation") return ScanOrder::random_permutation;
  throw ConfigError("unknown scan order '" + s + "' (systematic, random-permutation)");
}

Backend parse_backend(const std::string& s) {
  if (s == "gibbs") return Backend::gibbs;
  if (s == "metropolis") return Backend::metropolis;
  throw ConfigError("unknown backend '" + s + "' (gibbs, metropolis)");
}

LatentMechanism parse_latent_mechanism(const std::string& s) {
  if (s == "exact-mixture") return LatentMechanism::exact_mixture;
  if (s == "rejection") return LatentMechanism::rejection;
  throw ConfigError("unknown z_update '" + s + "' (exact-mixture, rejection)");
}

void SamplerConfig::validate() const {
  if (iterations < 1) throw ConfigError("sampler: iterations must be positive");
  if (thin < 1) throw ConfigError("sampler: thin must be >= 1");
  if (burn_in >= iterations) throw ConfigError("sampler: burn_in must be below iterations");
  if (iterations >= (std::uint64_t{1} << 40)) throw ConfigError("sampler: too many iterations");
  if (!(mh_step > 0.0)) throw ConfigError("sampler: mh_step must be positive");
}

double ChainOutput::acceptance_rate() const {
  double a = 0.0, p = 0.0;
  for (std::size_t t = 0; t < accepted_moves.size(); ++t) {
    a += accepted_moves[t];
    p += proposed_moves[t];
  }
  return p > 0.0 ? a / p : 0.0;
}

std::vector<double> ChainOutput::inclusion_frequencies() const {
  if (draws.empty()) return {};
  std::vector<double> f(draws.front().indicator.k(), 0.0);
  for (const auto& d : draws)
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += d.indicator.test(j) ? 1.0 : 0.0;
  for (double& a : f) a /= static_cast<double>(draws.size());
  return f;
}

double ChainOutput::posterior_mean_smoothed_risk() const {
  const std::size_t start = config.burn_in;
  if (risk_smoothed.size() <= start) return 0.0;
  double s = 0.0;
  std::size_t c = 0;
  for (std::size_t t = start; t < risk_smoothed.size(); ++t) {
    if ((t + 1 - config.burn_in) % config.thin != 0) continue;
    s += risk_smoothed[t];
    ++c;
  }
  return c ? s / static_cast<double>(c) : 0.0;
}

double augmented_log_joint(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                           const PriorSpec& prior) {
  check_inputs(data, prior);
  if (static_cast<std::size_t>(state.z.size()) != data.n()) throw ConfigError("sampler: Z length mismatch");
  const Eigen::VectorXd m = data.features() * state.beta();
  const double var = risk.sigma_n * risk.sigma_n;
  std::vector<double> terms(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const std::size_t s = state.z[ii] > 0.0 ? 1 : 0;
    terms[i] = log_normal_pdf(state.z[ii], m[ii], var) + risk.log_a[s][static_cast<std::size_t>(data.label(i))];
  }
  double total = 0.0;
  for (double t : terms) total += t;
  return total + log_prior_model(state.indicator, prior) +
         log_prior_coefficients(state.coefficients, state.indicator, prior);
}

Eigen::VectorXd step1_update_z(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                               LatentMechanism mech, std::uint64_t seed, std::uint64_t stream) {
  const Eigen::VectorXd m = predictor(data, state.indicator, state.coefficients);
  Eigen::VectorXd z;
  kernels::omp::update_latent(m, data.labels(), risk, {seed, stream, mech}, z);
  return z;
}

double sign_log_weight(const Eigen::VectorXd& z, const Dataset& data, const ModelIndicator& indicator, int beta1,
                       double sigma, double v) {
  const Eigen::VectorXd r = shifted_latent(z, data, beta1);
  ActiveSet set(data, sigma, v);
  set.reset(indicator.active(), r);
  return std::log(0.5) + 0.5 * (set.current().quad - r.squaredNorm()) / (sigma * sigma);
}

int step2a_update_sign(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                       const PriorSpec& prior, Rng& rng) {
  const double wp = sign_log_weight(state.z, data, state.indicator, +1, risk.sigma_n, prior.v);
  const double wm = sign_log_weight(state.z, data, state.indicator, -1, risk.sigma_n, prior.v);
  return rng.uniform() < prob_one(wm, wp) ? 1 : -1;
}

std::pair<double, double> indicator_branch_log_weights(const SamplerState& state, const Dataset& data,
                                                       const RiskSpec& risk, const PriorSpec& prior,
                                                       std::size_t j) {
  check_inputs(data, prior);
  if (j == 0 || j >= data.k()) throw ConfigError("sampler: indicator index out of range");
  const Eigen::VectorXd r = shifted_latent(state.z, data, state.coefficients.beta1);
  ActiveSet set(data, risk.sigma_n, prior.v);
  set.reset(state.indicator.active(), r);
  return branch_weights(set, state.indicator, j, r, prior, risk.sigma_n);
}

ModelIndicator step2b_update_indicator(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                                       const PriorSpec& prior, Rng& rng, const std::vector<std::size_t>& order,
                                       std::uint32_t* flips) {
  const Eigen::VectorXd r = shifted_latent(state.z, data, state.coefficients.beta1);
  ModelIndicator ind = state.indicator;
  ActiveSet set(data, risk.sigma_n, prior.v);
  set.reset(ind.active(), r);
  std::uint32_t count = 0;
  for (std::size_t j : order) {
    const auto [w0, w1] = branch_weights(set, ind, j, r, prior, risk.sigma_n);
    const bool bit = rng.uniform() < prob_one(w0, w1);
    if (bit != ind.test(j)) {
      ind.set(j, bit);
      set.reset(ind.active(), r);
      ++count;
    }
  }
  if (flips) *flips = count;
  return ind;
}

double CoefficientConditional::log_density(const Eigen::VectorXd& x) const {
  const Eigen::Index d = mean.size();
  if (x.size() != d) throw ConfigError("coefficient conditional: dimension mismatch");
  if (d == 0) return 0.0;
  const Eigen::VectorXd u = lower.transpose() * (x - mean);
  const double log_det_s = 2.0 * lower.diagonal().array().log().sum();
  return -0.5 * static_cast<double>(d) * std::log(2.0 * M_PI * sigma * sigma) + 0.5 * log_det_s -
         0.5 * u.squaredNorm() / (sigma * sigma);
}

CoefficientConditional coefficient_conditional(const SamplerState& state, const Dataset& data,
                                               const RiskSpec& risk, const PriorSpec& prior) {
  const Eigen::VectorXd r = shifted_latent(state.z, data, state.coefficients.beta1);
  ActiveSet set(data, risk.sigma_n, prior.v);
  set.reset(state.indicator.active(), r);
  return {set.factor().solve(set.b()), set.factor().lower(), risk.sigma_n};
}

namespace {

Eigen::VectorXd draw_coefficients(const SpdFactor& f, const Eigen::VectorXd& b, double sigma, Rng& rng) {
  const Eigen::Index d = f.dim();
  if (d == 0) return {};
  Eigen::VectorXd eps(d);
  for (Eigen::Index t = 0; t < d; ++t) eps[t] = rng.normal();
  return f.solve(b) + sigma * f.solve_lower_transpose(eps);
}

}  // namespace

Eigen::VectorXd step3_update_coefficients(const SamplerState& state, const Dataset& data, const RiskSpec& risk,
                                          const PriorSpec& prior, Rng& rng) {
  const Eigen::VectorXd r = shifted_latent(state.z, data, state.coefficients.beta1);
  ActiveSet set(data, risk.sigma_n, prior.v);
  set.reset(state.indicator.active(), r);
  return draw_coefficients(set.factor(), set.b(), risk.sigma_n, rng);
}

SamplerState initial_state(const Dataset& data, const RiskSpec& risk, const SamplerConfig& config) {
  SamplerState s(data.k());
  s.coefficients.beta1 = 1;
  s.z = step1_update_z(s, data, risk, config.z_update, config.seed, stream_id(config.chain, 0, StreamTag::init));
  return s;
}

ChainOutput run_chain(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                      const SamplerConfig& config) {
  config.validate();
  check_inputs(data, prior);
  const double sigma = risk.sigma_n;
  const std::uint32_t chain = config.chain;
  Recorder rec(config);
  SamplerState state = initial_state(data, risk, config);
  Eigen::VectorXd m = predictor(data, state.indicator, state.coefficients);
  ActiveSet set(data, sigma, prior.v);

  for (std::uint64_t t = 1; t <= config.iterations; ++t) {
    // Step 1
    kernels::omp::update_latent(m, data.labels(), risk,
                                {config.seed, stream_id(chain, t, StreamTag::latent), config.z_update}, state.z);

    // Step 2a: S depends on gamma only, so one factor serves both signs.
    const int old_sign = state.coefficients.beta1;
    {
      const auto x1 = data.column(Dataset::anchor_index);
      const Eigen::VectorXd rp = state.z - x1;
      const Eigen::VectorXd rm = state.z + x1;
      set.reset(state.indicator.active(), rp);
      const double qp = set.current().quad;
      const Eigen::VectorXd bm = selected_columns(data, set.cols()).transpose() * rm;
      const double qm = set.factor().quadratic_form(bm);
      const double wp = 0.5 * (qp - rp.squaredNorm()) / (sigma * sigma);
      const double wm = 0.5 * (qm - rm.squaredNorm()) / (sigma * sigma);
      Rng rng(config.seed, stream_id(chain, t, StreamTag::sign));
      state.coefficients.beta1 = rng.uniform() < prob_one(wm, wp) ? 1 : -1;
    }

    // Step 2b
    const Eigen::VectorXd r = shifted_latent(state.z, data, state.coefficients.beta1);
    set.reset(state.indicator.active(), r);
    std::uint32_t flips = 0;
    {
      Rng rng(config.seed, stream_id(chain, t, StreamTag::indicator));
      for (std::size_t j : scan_order(data.k(), config.scan_order, config.seed, chain, t)) {
        const auto [w0, w1] = branch_weights(set, state.indicator, j, r, prior, sigma);
        const bool bit = rng.uniform() < prob_one(w0, w1);
        if (bit != state.indicator.test(j)) {
          state.indicator.set(j, bit);
          set.reset(state.indicator.active(), r);
          ++flips;
        }
      }
    }

    // Step 3
    {
      Rng rng(config.seed, stream_id(chain, t, StreamTag::coefficients));
      state.coefficients.active = draw_coefficients(set.factor(), set.b(), sigma, rng);
    }
    state.iteration = t;

    m = predictor(data, state.indicator, state.coefficients);
    const std::uint32_t moved = flips + (state.coefficients.beta1 != old_sign ? 1u : 0u);
    rec.record(t, state.indicator, state.coefficients, smoothed_risk_from_predictor(m, data, risk), moved,
               static_cast<std::uint32_t>(data.k()));
  }
  return std::move(rec.out);
}

double metropolis_log_target(const ModelIndicator& indicator, const Coefficients& coeffs, const Dataset& data,
                             const RiskSpec& risk, const PriorSpec& prior) {
  const Eigen::VectorXd m = data.features() * assemble_beta(indicator, coeffs);
  return log_prior_model(indicator, prior) + log_prior_coefficients(coeffs, indicator, prior) -
         risk.psi * kernels::omp::loss_sum(m, data.labels(), risk);
}

ChainOutput run_metropolis(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                           const SamplerConfig& config) {
  config.validate();
  check_inputs(data, prior);
  const std::uint32_t chain = config.chain;
  const double psi = risk.psi;
  const double log_odds_birth = log_bernoulli(prior.lambda, true) - log_bernoulli(prior.lambda, false);
  Recorder rec(config);

  ModelIndicator ind(data.k());
  Coefficients c{1, Eigen::VectorXd()};
  Eigen::VectorXd m = predictor(data, ind, c);
  double loss = kernels::omp::loss_sum(m, data.labels(), risk);
  Eigen::VectorXd mp;

  auto accept = [&](Rng& rng, double log_ratio) { return std::log(rng.uniform()) < log_ratio; };

  for (std::uint64_t t = 1; t <= config.iterations; ++t) {
    Rng rng(config.seed, stream_id(chain, t, StreamTag::metropolis));
    std::uint32_t acc = 0, prop = 0;

    // Sign flip.
    {
      ++prop;
      mp = m - 2.0 * static_cast<double>(c.beta1) * data.column(Dataset::anchor_index);
      const double lp = kernels::omp::loss_sum(mp, data.labels(), risk);
      if (accept(rng, -psi * (lp - loss))) {
        c.beta1 = -c.beta1;
        m.swap(mp);
        loss = lp;
        ++acc;
      }
    }

    // Birth/death toggles; a birth draws its coefficient from the prior.
    for (std::size_t j : scan_order(data.k(), config.scan_order, config.seed, chain, t)) {
      ++prop;
      const auto cols = ind.active();
      const auto pos = static_cast<Eigen::Index>(std::lower_bound(cols.begin(), cols.end(), j) - cols.begin());
      const auto d = static_cast<Eigen::Index>(cols.size());
      if (!ind.test(j)) {
        const double b = std::sqrt(prior.v) * rng.normal();
        const double u = rng.uniform();
        if (ind.size() + 1 > prior.rbar) continue;
        mp = m + b * data.column(j);
        const double lp = kernels::omp::loss_sum(mp, data.labels(), risk);
        if (std::log(u) < log_odds_birth - psi * (lp - loss)) {
          Eigen::VectorXd a(d + 1);
          a.head(pos) = c.active.head(pos);
          a[pos] = b;
          a.tail(d - pos) = c.active.tail(d - pos);
          c.active.swap(a);
          ind.set(j, true);
          m.swap(mp);
          loss = lp;
          ++acc;
        }
      } else {
        const double b = c.active[pos];
        const double u = rng.uniform();
        mp = m - b * data.column(j);
        const double lp = kernels::omp::loss_sum(mp, data.labels(), risk);
        if (std::log(u) < -log_odds_birth - psi * (lp - loss)) {
          Eigen::VectorXd a(d - 1);
          a.head(pos) = c.active.head(pos);
          a.tail(d - 1 - pos) = c.active.tail(d - 1 - pos);
          c.active.swap(a);
          ind.set(j, false);
          m.swap(mp);
          loss = lp;
          ++acc;
        }
      }
    }

    // Random-walk perturbation of each active coefficient.
    const auto cols = ind.active();
    for (std::size_t p = 0; p < cols.size(); ++p) {
      ++prop;
      const auto pi = static_cast<Eigen::Index>(p);
      const double b = c.active[pi];
      const double bp = b + config.mh_step * rng.normal();
      const double u = rng.uniform();
      mp = m + (bp - b) * data.column(cols[p]);
      const double lp = kernels::omp::loss_sum(mp, data.labels(), risk);
      const double lr = log_normal_pdf(bp, 0.0, prior.v) - log_normal_pdf(b, 0.0, prior.v) - psi * (lp - loss);
      if (std::log(u) < lr) {
        c.active[pi] = bp;
        m.swap(mp);
        loss = lp;
        ++acc;
      }
    }

    rec.record(t, ind, c, smoothed_risk_from_predictor(m, data, risk), acc, prop);
  }
  return std::move(rec.out);
}

ChainOutput run_sampler(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                        const SamplerConfig& config) {
  return config.backend == Backend::gibbs ? run_chain(data, risk, prior, config)
                                          : run_metropolis(data, risk, prior, config);
}

std::vector<ChainOutput> run_chains(const Dataset& data, const RiskSpec& risk, const PriorSpec& prior,
                                    const SamplerConfig& config, std::uint32_t chains) {
  if (chains < 1) throw ConfigError("sampler: need at least one chain");
  std::vector<ChainOutput> out(chains);
  std::vector<std::string> errors(chains);
  std::vector<int> kinds(chains, 0);
#pragma omp parallel for schedule(dynamic) if (chains > 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chains); ++c) {
    SamplerConfig cfg = config;
    cfg.chain = config.chain + static_cast<std::uint32_t>(c);
    try {
      out[static_cast<std::size_t>(c)] = run_sampler(data, risk, prior, cfg);
    } catch (const ConfigError& e) {
      kinds[static_cast<std::size_t>(c)] = 2;
      errors[static_cast<std::size_t>(c)] = e.what();
    } catch (const NumericAbort& e) {
      kinds[static_cast<std::size_t>(c)] = 4;
      errors[static_cast<std::size_t>(c)] = e.what();
    }
  }
  for (std::uint32_t c = 0; c < chains; ++c) {
    if (kinds[c] == 2) throw ConfigError(errors[c]);
    if (kinds[c] == 4) throw NumericAbort(errors[c]);
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const ChainOutput& chain,
                     const std::vector<std::pair<std::string, std::string>>& header) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
  out << "iteration,model_size,R_n_smoothed,beta1,accepted_moves\n";
  for (std::size_t t = 0; t < chain.model_size.size(); ++t)
    out << (t + 1) << ',' << chain.model_size[t] << ',' << format_double(chain.risk_smoothed[t]) << ','
        << chain.beta1[t] << ',' << chain.accepted_moves[t] << '\n';
}

}  // namespace gibbsvs
