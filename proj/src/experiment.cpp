#include "gibbsvs/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "gibbsvs/oracle.hpp"
#include "gibbsvs/risk.hpp"

namespace gibbsvs {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
    throw ConfigError("config: '" + key + "' expects a number, got '" + raw + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + raw + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + raw + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(key, item));
  return out;
}

bool is_auto(const std::string& raw) { return trim(raw) == "auto" || trim(raw).empty(); }

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"seed"}},
      {"generator",
       {"kind", "n", "lambda", "k", "support", "coef_scale", "noise", "path", "label_column", "anchor_column",
        "seed"}},
      {"risk", {"rho", "psi", "sigma", "psi_grid"}},
      {"prior", {"lambda", "rbar", "v", "delta", "eig_bound", "m_upper", "m_lower"}},
      {"sampler", {"backend", "iterations", "burn_in", "thin", "scan_order", "z_update", "mh_step", "chains"}},
      {"evaluation", {"analytic", "holdout", "validation", "max_draws", "baseline"}},
  };
  return s;
}

void apply(ExperimentConfig& c, const std::string& section, const std::string& key, const std::string& v) {
  const std::string name = section.empty() ? key : section + "." + key;
  auto& g = c.generator;
  auto& s = c.sampler;
  if (section.empty()) {
    c.seed = to_u64(name, v);
  } else if (section == "generator") {
    if (key == "kind") g.kind = parse_generator_kind(trim(v));
    else if (key == "n") c.n = to_u64(name, v);
    else if (key == "lambda") g.lambda = to_double(name, v);
    else if (key == "k") g.k = to_u64(name, v);
    else if (key == "support") g.support = to_u64(name, v);
    else if (key == "coef_scale") g.coef_scale = to_double(name, v);
    else if (key == "noise") g.noise = to_double(name, v);
    else if (key == "path") g.path = trim(v);
    else if (key == "label_column") g.label_column = trim(v);
    else if (key == "anchor_column") g.anchor_column = trim(v);
    else if (key == "seed") {
      g.seed = to_u64(name, v);
      c.generator_seed_set = true;
    }
  } else if (section == "risk") {
    if (key == "rho") {
      const auto r = to_list(name, v);
      if (r.size() != 4) throw ConfigError("config: risk.rho needs four entries");
      c.rho = {{{r[0], r[1]}, {r[2], r[3]}}};
    } else if (key == "psi") c.psi = to_double(name, v);
    else if (key == "sigma") c.sigma = is_auto(v) ? std::nullopt : std::optional<double>(to_double(name, v));
    else if (key == "psi_grid") c.psi_grid = to_list(name, v);
  } else if (section == "prior") {
    if (key == "lambda") c.lambda = is_auto(v) ? std::nullopt : std::optional<double>(to_double(name, v));
    else if (key == "rbar") c.rbar = is_auto(v) ? std::nullopt : std::optional<std::size_t>(to_u64(name, v));
    else if (key == "v") c.v = to_double(name, v);
    else if (key == "delta") c.delta = is_auto(v) ? std::nullopt : std::optional<double>(to_double(name, v));
    else if (key == "eig_bound") c.eig_bound = to_double(name, v);
    else if (key == "m_upper") c.size_rule.m_upper = to_double(name, v);
    else if (key == "m_lower") c.size_rule.m_lower = to_double(name, v);
  } else if (section == "sampler") {
    if (key == "backend") s.backend = parse_backend(trim(v));
    else if (key == "iterations") s.iterations = to_u64(name, v);
    else if (key == "burn_in") s.burn_in = to_u64(name, v);
    else if (key == "thin") s.thin = to_u64(name, v);
    else if (key == "scan_order") s.scan_order = parse_scan_order(trim(v));
    else if (key == "z_update") s.z_update = parse_latent_mechanism(trim(v));
    else if (key == "mh_step") s.mh_step = to_double(name, v);
    else if (key == "chains") c.chains = static_cast<std::uint32_t>(to_u64(name, v));
  } else if (section == "evaluation") {
    if (key == "analytic") c.analytic = is_auto(v) ? std::nullopt : std::optional<bool>(to_bool(name, v));
    else if (key == "holdout") c.holdout = to_u64(name, v);
    else if (key == "validation") c.validation = to_u64(name, v);
    else if (key == "max_draws") c.max_draws = to_u64(name, v);
    else if (key == "baseline") c.baseline = to_bool(name, v);
  }
}

std::string fmt(double x) { return format_double(x); }

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "auto";
  if constexpr (std::is_same_v<T, double>) return fmt(*v);
  else if constexpr (std::is_same_v<T, bool>) return *v ? "true" : "false";
  else return std::to_string(*v);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Resolved {
  Dataset train;
  RiskSpec risk;
  PriorSpec prior;
  double delta = 0.0;
  ConditionReport conditions;
};

Resolved resolve(const ExperimentConfig& c, double psi) {
  GeneratorSpec gen = c.generator;
  gen.seed = c.data_seed();
  if (gen.kind != GeneratorKind::file && c.n < 2) throw ConfigError("config: generator.n must be at least 2");
  Dataset train = sample(gen, c.n, 0);
  const std::size_t n = train.n();
  const std::size_t k = train.k();
  if (n < 2) throw ConfigError("config: need at least two observations");
  const double sigma = c.sigma ? *c.sigma : default_sigma(n);
  const double delta = c.delta ? *c.delta : default_delta(n);
  PriorSpec prior = auto_prior_spec(n, k, c.v, delta, c.size_rule, c.eig_bound);
  const std::size_t rbar = c.rbar ? *c.rbar : prior.rbar;
  const double lambda = c.lambda ? *c.lambda : std::min(1.0, static_cast<double>(rbar) / (2.0 * static_cast<double>(k)));
  prior = make_prior_spec(lambda, rbar, c.v, k, c.eig_bound);
  RiskSpec risk = derive_risk_spec(c.rho, psi, sigma);
  ConditionReport cond = validate_conditions(train, prior, risk, delta, c.size_rule);
  return {std::move(train), risk, prior, delta, std::move(cond)};
}

// Evenly spaced subset of the pooled retained draws.
std::vector<const Draw*> pick_draws(const std::vector<ChainOutput>& chains, std::size_t max_draws) {
  std::vector<const Draw*> all;
  for (const auto& ch : chains)
    for (const auto& d : ch.draws) all.push_back(&d);
  if (max_draws == 0 || all.size() <= max_draws) return all;
  std::vector<const Draw*> out;
  out.reserve(max_draws);
  for (std::size_t i = 0; i < max_draws; ++i) out.push_back(all[i * all.size() / max_draws]);
  return out;
}

enum class EvalMode { analytic, holdout, training };

const char* to_string(EvalMode m) {
  switch (m) {
    case EvalMode::analytic: return "analytic";
    case EvalMode::holdout: return "holdout";
    case EvalMode::training: return "training";
  }
  return "?";
}

struct Evaluator {
  EvalMode mode;
  GeneratorSpec gen;
  const Dataset* data;  // holdout or training set
  RiskSpec spec;

  double rule_risk(const ModelIndicator& ind, const Coefficients& c) const {
    if (mode == EvalMode::analytic) return population_risk_analytic(assemble_beta(ind, c), gen, spec);
    return empirical_risk_unsmoothed(DecisionRule(ind, c), *data, spec);
  }
  double dense_risk(const Eigen::VectorXd& beta) const {
    if (mode == EvalMode::analytic) return population_risk_analytic(beta, gen, spec);
    return empirical_risk_unsmoothed(beta, *data, spec);
  }
};

double mean_risk(const Evaluator& ev, const std::vector<const Draw*>& draws) {
  std::vector<double> r(draws.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(draws.size()); ++i) {
    const Draw* d = draws[static_cast<std::size_t>(i)];
    r[static_cast<std::size_t>(i)] = ev.rule_risk(d->indicator, d->coefficients);
  }
  double s = 0.0;
  for (double a : r) s += a;
  return draws.empty() ? 0.0 : s / static_cast<double>(draws.size());
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  const auto& sch = schema();
  for (const auto& [name, node] : tree) {
    if (node.empty()) {  // top-level key
      if (!sch.at("").count(name)) throw ConfigError("config: unknown top-level key '" + name + "'");
      apply(c, "", name, node.data());
      continue;
    }
    const auto sec = sch.find(name);
    if (sec == sch.end() || name.empty()) throw ConfigError("config: unknown section [" + name + "]");
    for (const auto& [key, val] : node) {
      if (!sec->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
      apply(c, name, key, val.data());
    }
  }
  c.sampler.seed = c.seed;
  c.sampler.validate();
  if (c.chains < 1) throw ConfigError("config: sampler.chains must be >= 1");
  if (!(c.psi > 0.0)) throw ConfigError("config: risk.psi must be positive");
  for (double p : c.psi_grid)
    if (!(p > 0.0)) throw ConfigError("config: risk.psi_grid entries must be positive");
  validate(c.generator);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_echo(const ExperimentConfig& c) {
  const auto& g = c.generator;
  const auto& s = c.sampler;
  std::ostringstream o;
  o << "seed = " << c.seed << "\n\n[generator]\n"
    << "kind = " << to_string(g.kind) << "\nn = " << c.n << "\nlambda = " << fmt(g.lambda) << "\nk = " << g.k
    << "\nsupport = " << g.support << "\ncoef_scale = " << fmt(g.coef_scale) << "\nnoise = " << fmt(g.noise)
    << "\npath = " << g.path << "\nlabel_column = " << g.label_column << "\nanchor_column = " << g.anchor_column
    << "\nseed = " << c.data_seed() << "\n\n[risk]\n"
    << "rho = " << fmt(c.rho[0][0]) << ',' << fmt(c.rho[0][1]) << ',' << fmt(c.rho[1][0]) << ','
    << fmt(c.rho[1][1]) << "\npsi = " << fmt(c.psi) << "\nsigma = " << opt(c.sigma)
    << "\npsi_grid = " << join(c.psi_grid) << "\n\n[prior]\n"
    << "lambda = " << opt(c.lambda) << "\nrbar = " << opt(c.rbar) << "\nv = " << fmt(c.v)
    << "\ndelta = " << opt(c.delta) << "\neig_bound = " << fmt(c.eig_bound)
    << "\nm_upper = " << fmt(c.size_rule.m_upper) << "\nm_lower = " << fmt(c.size_rule.m_lower) << "\n\n[sampler]\n"
    << "backend = " << to_string(s.backend) << "\niterations = " << s.iterations << "\nburn_in = " << s.burn_in
    << "\nthin = " << s.thin << "\nscan_order = " << to_string(s.scan_order)
    << "\nz_update = " << to_string(s.z_update) << "\nmh_step = " << fmt(s.mh_step) << "\nchains = " << c.chains
    << "\n\n[evaluation]\n"
    << "analytic = " << opt(c.analytic) << "\nholdout = " << c.holdout << "\nvalidation = " << c.validation
    << "\nmax_draws = " << c.max_draws << "\nbaseline = " << (c.baseline ? "true" : "false") << '\n';
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_echo(config))));
  return buf;
}

const char* artifact_version() { return GIBBSVS_VERSION; }

RunReport run_experiment(const ExperimentConfig& config) {
  const GeneratorSpec gen = [&] {
    GeneratorSpec g = config.generator;
    g.seed = config.data_seed();
    return g;
  }();
  const bool resample = gen.kind != GeneratorKind::file;
  SamplerConfig scfg = config.sampler;
  scfg.seed = config.seed;

  // Temperature selection on a validation sample.
  double psi = config.psi;
  ordered_json psi_table = ordered_json::array();
  if (!config.psi_grid.empty()) {
    if (!resample) throw ConfigError("config: psi_grid needs a generator that can draw validation rows");
    const Dataset valid = sample(gen, config.validation, 2);
    double best = std::numeric_limits<double>::infinity();
    for (double p : config.psi_grid) {
      Resolved r = resolve(config, p);
      if (r.conditions.blocking()) break;
      SamplerConfig c1 = scfg;
      c1.chain = 1000;  // streams apart from the final run
      const ChainOutput ch = run_sampler(r.train, r.risk, r.prior, c1);
      const Evaluator ev{EvalMode::holdout, gen, &valid, r.risk};
      const double risk = mean_risk(ev, pick_draws({ch}, config.max_draws));
      psi_table.push_back({{"psi", p}, {"validation_risk", risk}});
      if (risk < best) {
        best = risk;
        psi = p;
      }
    }
  }

  Resolved r = resolve(config, psi);
  RunReport rep;
  rep.config_text = config_echo(config);
  rep.conditions_json = r.conditions.to_json();
  rep.psi = psi;
  if (r.conditions.blocking()) {
    std::string msg = "blocking condition failure:";
    for (const auto& e : r.conditions.entries)
      if (e.status == ConditionStatus::fail) msg += " " + e.name + " (" + e.message + ")";
    throw ConfigError(msg);
  }

  const std::vector<ChainOutput> chains = run_chains(r.train, r.risk, r.prior, scfg, config.chains);

  const bool analytic = config.analytic.value_or(gen.finite_support());
  if (analytic && !gen.finite_support())
    throw ConfigError("config: analytic evaluation needs a finite-support generator");
  std::optional<Dataset> holdout;
  EvalMode mode = EvalMode::training;
  if (analytic) mode = EvalMode::analytic;
  else if (config.holdout > 0 && resample) {
    holdout = sample(gen, config.holdout, 1);
    mode = EvalMode::holdout;
  }
  const Evaluator ev{mode, gen, holdout ? &*holdout : &r.train, r.risk};
  const auto draws = pick_draws(chains, config.max_draws);
  rep.gibbs_risk = mean_risk(ev, draws);
  rep.gibbs_risk_analytic = mode == EvalMode::analytic;

  ordered_json mle = nullptr;
  if (config.baseline) {
    const LogisticFit fit = logistic_mle_baseline(r.train);
    rep.mle_risk = ev.dense_risk(fit.coefficients);
    mle = {{"risk", *rep.mle_risk},
           {"converged", fit.converged},
           {"iterations", fit.iterations},
           {"coefficients", std::vector<double>(fit.coefficients.data(),
                                                fit.coefficients.data() + fit.coefficients.size())}};
  }

  // Pool chain statistics.
  double acc = 0.0, prop = 0.0, smooth = 0.0, size_sum = 0.0;
  std::size_t retained = 0;
  std::vector<double> incl(r.train.k(), 0.0);
  for (const auto& ch : chains) {
    for (std::size_t t = 0; t < ch.accepted_moves.size(); ++t) {
      acc += ch.accepted_moves[t];
      prop += ch.proposed_moves[t];
    }
    smooth += ch.posterior_mean_smoothed_risk();
    for (const auto& d : ch.draws) {
      size_sum += static_cast<double>(d.indicator.size());
      for (std::size_t j = 0; j < incl.size(); ++j) incl[j] += d.indicator.test(j) ? 1.0 : 0.0;
    }
    retained += ch.draws.size();
  }
  for (double& f : incl) f /= std::max<double>(1.0, static_cast<double>(retained));
  rep.acceptance_rate = prop > 0.0 ? acc / prop : 0.0;
  rep.posterior_mean_smoothed_risk = smooth / static_cast<double>(chains.size());
  rep.inclusion = incl;

  const std::string hash = config_hash(config);
  for (const auto& ch : chains) {
    std::ostringstream o;
    write_trace_csv(o, ch,
                    {{"seed", std::to_string(config.seed)},
                     {"config_hash", hash},
                     {"version", artifact_version()},
                     {"chain", std::to_string(ch.config.chain)}});
    rep.traces.push_back(o.str());
  }

  ordered_json j;
  j["version"] = artifact_version();
  j["seed"] = config.seed;
  j["config_hash"] = hash;
  j["data_seed"] = config.data_seed();
  j["generator"] = to_string(gen.kind);
  j["n"] = r.train.n();
  j["k"] = r.train.k();
  j["psi"] = psi;
  j["sigma_n"] = r.risk.sigma_n;
  j["delta_n"] = r.delta;
  j["prior"] = {{"lambda", r.prior.lambda}, {"rbar", r.prior.rbar}, {"v", r.prior.v}};
  j["backend"] = to_string(scfg.backend);
  j["chains"] = config.chains;
  j["iterations"] = scfg.iterations;
  j["burn_in"] = scfg.burn_in;
  j["thin"] = scfg.thin;
  j["retained_draws"] = retained;
  j["evaluated_draws"] = draws.size();
  j["risk_evaluation"] = to_string(mode);
  j["gibbs_risk"] = rep.gibbs_risk;
  j["mle_risk"] = rep.mle_risk ? ordered_json(*rep.mle_risk) : ordered_json(nullptr);
  j["mle"] = mle;
  j["posterior_mean_smoothed_risk"] = rep.posterior_mean_smoothed_risk;
  j["acceptance_rate"] = rep.acceptance_rate;
  j["mean_model_size"] = size_sum / std::max<double>(1.0, static_cast<double>(retained));
  j["inclusion_frequencies"] = incl;
  if (!psi_table.empty()) j["psi_selection"] = psi_table;
  rep.summary_json = j.dump(2) + "\n";
  return rep;
}

void write_report(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (fs::path(dir) / name).string() + "'");
    out << body;
  };
  put("config.ini", report.config_text);
  put("conditions.json", report.conditions_json + "\n");
  if (report.traces.size() == 1) put("trace.csv", report.traces.front());
  else
    for (std::size_t c = 0; c < report.traces.size(); ++c) put("trace_" + std::to_string(c) + ".csv", report.traces[c]);
  put("summary.json", report.summary_json);
}

std::string error_json(const std::string& kind, const std::string& message, int exit_code) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j.dump(2) + "\n";
}

}  // namespace gibbsvs
