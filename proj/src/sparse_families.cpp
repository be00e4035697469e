#include "gibbsvs/sparse_families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gibbsvs/core_types.hpp"
#include "gibbsvs/rng.hpp"

namespace gibbsvs {

const char* to_string(Family f) {
  switch (f) {
    case Family::Hb: return "Hb";
    case Family::H1: return "H1";
    case Family::H2: return "H2";
    case Family::H3: return "H3";
    case Family::Hm: return "Hm";
    case Family::HE: return "HE";
  }
  return "?";
}

double FamilySpec::v_n() const {
  const double ln = std::log(static_cast<double>(n));
  return static_cast<double>(n) * delta_n * delta_n / (ln * ln);
}

void FamilySpec::validate() const {
  if (n < 2) throw ConfigError("family: n must be at least 2");
  if (!(delta_n > 0.0)) throw ConfigError("family: delta_n must be positive");
  if (!(c > 0.0) || !(c_prime > 0.0) || !(c_dprime > 0.0) || !(q > 0.0))
    throw ConfigError("family: constants must be positive");
  if (family == Family::Hm && !(m > 0.0)) throw ConfigError("family: m must be positive");
}

std::vector<double> sorted_magnitudes(const Eigen::VectorXd& beta) {
  std::vector<double> a;
  a.reserve(beta.size() > 0 ? static_cast<std::size_t>(beta.size() - 1) : 0);
  for (Eigen::Index j = 1; j < beta.size(); ++j) a.push_back(std::abs(beta[j]));
  std::stable_sort(a.begin(), a.end(), std::greater<>());
  return a;
}

namespace {

// suffix[r] = sum_{j > r} b_(j) (1-based j), r = 0..len.
std::vector<double> tail_sums(const std::vector<double>& a) {
  std::vector<double> s(a.size() + 1, 0.0);
  for (std::size_t r = a.size(); r-- > 0;) s[r] = s[r + 1] + a[r];
  return s;
}

std::size_t head_len(double v, std::size_t len) {
  return std::min(len, static_cast<std::size_t>(std::floor(v)));
}

}  // namespace

bool is_member(const Eigen::VectorXd& beta, const FamilySpec& spec) {
  spec.validate();
  if (beta.size() < 1 || std::abs(beta[0]) != 1.0) throw ConfigError("family: beta must have |beta_1| = 1");
  const auto a = sorted_magnitudes(beta);
  const auto tails = tail_sums(a);
  const double ln = std::log(static_cast<double>(spec.n));
  const double v = spec.v_n();
  const std::size_t h = head_len(v, a.size());
  const double total = tails[0];
  const double tail_bound = spec.c_prime * spec.delta_n / ln;

  switch (spec.family) {
    case Family::Hb: {
      const auto nonzero = static_cast<double>(std::count_if(a.begin(), a.end(), [](double x) { return x != 0.0; }));
      const double sup = a.empty() ? 0.0 : a.front();
      return nonzero <= v && sup <= spec.c;
    }
    case Family::H1: {
      double head2 = 0.0;
      for (std::size_t j = 0; j < h; ++j) head2 += a[j] * a[j];
      return head2 <= spec.c * spec.c * static_cast<double>(spec.n) * spec.delta_n * spec.delta_n / ln &&
             tails[h] <= tail_bound;
    }
    case Family::H2: {
      const double sup = h > 0 ? a.front() : 0.0;
      return sup <= spec.c * std::sqrt(ln) && tails[h] <= tail_bound;
    }
    case Family::H3:
      return total <= spec.c && tails[h] <= tail_bound;
    case Family::Hm:
    case Family::HE: {
      if (total > spec.c) return false;
      // Past r = K - 1 the tail is empty and the bound holds trivially.
      for (auto r = static_cast<std::size_t>(std::ceil(spec.q)); r < a.size(); ++r) {
        const double rr = static_cast<double>(r);
        const double bound = spec.family == Family::Hm ? std::pow(rr, -spec.m) : std::exp(-spec.c_dprime * rr);
        if (tails[r] > bound) return false;
      }
      return true;
    }
  }
  return false;
}

bool InclusionReport::ok() const {
  return std::all_of(parts.begin(), parts.end(), [](const InclusionPart& p) { return p.violations == 0; });
}

InclusionReport check_inclusions(const InclusionConstants& k, const std::vector<std::size_t>& n_grid,
                                 const std::vector<Eigen::VectorXd>& betas) {
  struct Part {
    const char* name;
    Family larger;
    Family smaller;
    int delta_rule;  // 0: n^{-1/2}(ln n)^2, 1: n^{-m/(2m+1)}(ln n)^2
  };
  const Part parts[] = {
      {"(i) H1 > H2", Family::H1, Family::H2, 0},   {"(ii) H2 > H3", Family::H2, Family::H3, 0},
      {"(iii) H2 > Hb", Family::H2, Family::Hb, 0}, {"(vi) Hm > HE", Family::Hm, Family::HE, 0},
      {"(vii) H3 > Hm", Family::H3, Family::Hm, 1}, {"(viii) H3 > HE", Family::H3, Family::HE, 0},
  };
  InclusionReport report;
  for (const Part& p : parts) {
    InclusionPart out;
    out.name = p.name;
    for (std::size_t n : n_grid) {
      const double ln = std::log(static_cast<double>(n));
      const double delta = p.delta_rule == 0 ? ln * ln / std::sqrt(static_cast<double>(n))
                                             : std::pow(static_cast<double>(n), -k.m / (2.0 * k.m + 1.0)) * ln * ln;
      FamilySpec big{p.larger, k.c, k.c_prime, k.c_dprime, k.m, k.q, n, delta};
      FamilySpec small = big;
      small.family = p.smaller;
      for (const auto& b : betas) {
        if (!is_member(b, small)) continue;
        ++out.premise;
        if (!is_member(b, big)) {
          ++out.violations;
          if (out.counterexamples.size() < 5) out.counterexamples.push_back(b);
        }
      }
    }
    report.parts.push_back(std::move(out));
  }
  return report;
}

std::vector<Eigen::VectorXd> random_trial_betas(std::size_t count, std::size_t k, double scale, std::uint64_t seed) {
  if (k < 2) throw ConfigError("trial betas: need K >= 2");
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    Rng rng(seed, stream_id(0, t, StreamTag::evaluation));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    b[0] = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const auto sign = [&] { return rng.bernoulli(0.5) ? 1.0 : -1.0; };
    const double amp = scale * rng.uniform();
    switch (rng.below(4)) {
      case 0: {  // a few large entries
        const std::uint64_t s = 1 + rng.below(std::min<std::uint64_t>(4, k - 1));
        for (std::uint64_t i = 0; i < s; ++i) b[static_cast<Eigen::Index>(1 + rng.below(k - 1))] = sign() * amp * rng.uniform();
        break;
      }
      case 1: {  // geometric
        const double ratio = 0.05 + 0.9 * rng.uniform();
        double a = amp;
        for (std::size_t j = 1; j < k; ++j, a *= ratio) b[static_cast<Eigen::Index>(j)] = sign() * a;
        break;
      }
      case 2: {  // polynomial
        const double power = 1.5 + 3.0 * rng.uniform();
        for (std::size_t j = 1; j < k; ++j)
          b[static_cast<Eigen::Index>(j)] = sign() * amp * std::pow(static_cast<double>(j), -power);
        break;
      }
      default: {  // dense small
        for (std::size_t j = 1; j < k; ++j) b[static_cast<Eigen::Index>(j)] = amp * (2.0 * rng.uniform() - 1.0) / static_cast<double>(k);
        break;
      }
    }
    // Shuffle positions so sorting does real work.
    for (std::size_t j = k - 1; j > 1; --j)
      std::swap(b[static_cast<Eigen::Index>(j)], b[static_cast<Eigen::Index>(1 + rng.below(j))]);
    out.push_back(std::move(b));
  }
  return out;
}

Eigen::VectorXd witness_hb_not_h3(std::size_t k, const FamilySpec& spec) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  b[0] = 1.0;
  const std::size_t copies = std::min(k - 1, static_cast<std::size_t>(std::floor(spec.v_n())));
  for (std::size_t j = 1; j <= copies; ++j) b[static_cast<Eigen::Index>(j)] = spec.c;
  return b;
}

Eigen::VectorXd witness_h3_not_hb(std::size_t k, const FamilySpec& spec) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  b[0] = 1.0;
  const double a = spec.c_prime * spec.delta_n / std::log(static_cast<double>(spec.n));
  double w = 0.5 * a;
  for (std::size_t j = 1; j < k; ++j, w *= 0.5) b[static_cast<Eigen::Index>(j)] = w;
  return b;
}

}  // namespace gibbsvs
