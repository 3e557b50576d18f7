#include "smeans/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "smeans/distributions.hpp"
#include "smeans/function_spaces.hpp"
#include "smeans/multiplier_ops.hpp"
#include "smeans/signals.hpp"

namespace smeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kRoundoffLevel = 1e-12;

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double number_from_json(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    config_error("'" + key + "' must be a number or \"inf\"");
  }
  if (!j.is_number()) config_error("'" + key + "' must be a number");
  return j.get<double>();
}

nlohmann::json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "converge_function") return ExperimentKind::converge_function;
  if (s == "converge_distribution") return ExperimentKind::converge_distribution;
  if (s == "equivalence") return ExperimentKind::equivalence;
  if (s == "conditions") return ExperimentKind::conditions;
  config_error("unknown experiment kind '" + s + "'");
}

TheoremId theorem_from_string(const std::string& s) {
  if (s == "T1") return TheoremId::T1;
  if (s == "T2") return TheoremId::T2;
  if (s == "T3") return TheoremId::T3;
  config_error("unknown theorem '" + s + "'");
}

std::optional<GridFunction> build_window(const ExperimentConfig& c) {
  if (!c.window) return std::nullopt;
  const double L = c.grid.period();
  const double transition =
      c.window->transition.value_or(std::min(L / 16.0, 0.5 * (0.5 * L - c.window->radius)));
  return make_window(c.grid, c.window->radius, transition);
}

CompactDistribution distribution_of(const ExperimentConfig& c) {
  const int dim = c.grid.dimension();
  nlohmann::json j = c.distribution;
  std::optional<std::string> density_signal;
  if (j.contains("density_signal")) {
    density_signal = j.at("density_signal").get<std::string>();
    j.erase("density_signal");
  }
  if (!j.contains("atoms") && !j.contains("density_ref") && !density_signal)
    return CompactDistribution::dirac(dim);
  CompactDistribution f = distribution_from_json(j, dim);
  if (density_signal) {
    if (f.density()) config_error("distribution has both density_ref and density_signal");
    return CompactDistribution(dim, f.atoms(), make_signal(*density_signal, c.grid));
  }
  return f;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? kNan : (n * sxy - sx * sy) / denom;
}

void finish_report(ConvergenceReport& r, const std::vector<double>& ts) {
  std::vector<double> errors;
  for (const auto& rec : r.records) errors.push_back(rec.error);
  r.floor = errors.back();
  r.floor_validated = r.floor <= 2.0 * r.truncation_error;
  r.monotone = decreasing_to_floor(errors, r.floor, r.floor_validated);
  r.slope = fit_slope(ts, errors, r.floor, r.floor_validated);
  if (!r.hypotheses.all_pass())
    r.labels.push_back("counterexample: hypotheses not satisfied, run for exploration");
  if (!r.floor_validated) r.labels.push_back("floor not reached: errors still decaying");
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> Schedule::values() const {
  validate();
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = t0 * std::pow(ratio, i);
  return out;
}

void Schedule::validate() const {
  if (!(t0 > 0.0) || !std::isfinite(t0)) config_error("schedule t0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) config_error("schedule ratio must lie in (0, 1)");
  if (steps < 1) config_error("schedule needs at least one step");
}

void ExperimentConfig::validate() const {
  schedule.validate();
  if (space != "liouville" && space != "besov") config_error("space must be liouville or besov");
  if (via != "lp" && via != "modulus" && via != "classical")
    config_error("via must be lp, modulus or classical");
  if (format != "csv" && format != "json") config_error("format must be csv or json");
  if (!(p >= 1.0) || !(q >= 1.0) || !(p0 >= 1.0)) config_error("p, q, p0 must be >= 1");
  if (window) {
    const double L = grid.period();
    if (!(window->radius >= 0.0) || !(window->radius < 0.5 * L - grid.support_margin()))
      config_error("window radius must lie in [0, L/2 - L/8)");
    if (window->transition && !(*window->transition > 0.0))
      config_error("window transition must be positive");
  }
  if (kind == ExperimentKind::equivalence && corpus_size < 20)
    config_error("equivalence corpus needs at least 20 functions");
  if (kind == ExperimentKind::converge_distribution && space != "liouville")
    config_error("distribution runs use the liouville space");
  if (kind == ExperimentKind::converge_function && theorem == TheoremId::T3)
    config_error("T3 applies to distribution runs");
  parse_mean(mean);
  parse_symbol(symbol);
}

HypothesisParameters ExperimentConfig::hypothesis_parameters() const {
  HypothesisParameters h;
  h.N = grid.dimension();
  h.m = parse_symbol(symbol).degree();
  h.p = p;
  h.p0 = p0;
  h.alpha = alpha;
  h.alpha0 = alpha0;
  h.q = q;
  h.tau = tau;
  const double N = h.N;
  h.l = l.value_or(std::max(0, static_cast<int>(std::floor(N * (0.5 - 1.0 / p0)))) + 1);
  const double eps = N * (1.0 / p - 1.0 / p0);
  h.beta = beta.value_or(alpha0.value_or(N / p0) + alpha + eps);
  return h;
}

NormSpec ExperimentConfig::error_norm() const {
  if (kind == ExperimentKind::converge_distribution) return LiouvilleNorm{-alpha, p};
  if (space == "liouville") return LiouvilleNorm{alpha, p};
  if (via == "lp") return BesovLpNorm{alpha, p, q};
  if (via == "classical") return ClassicalBesovNorm{alpha, p, q};
  const int m = std::max(1, static_cast<int>(std::floor(alpha)) + 1);
  return BesovModulusNorm{alpha, p, q, m, 0};
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::converge_function: return "converge_function";
    case ExperimentKind::converge_distribution: return "converge_distribution";
    case ExperimentKind::equivalence: return "equivalence";
    case ExperimentKind::conditions: return "conditions";
  }
  return "?";
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) config_error("top level must be an object");
  static const std::set<std::string> known = {
      "kind",   "grid",     "symbol", "mean",   "theorem", "space",  "via",
      "alpha",  "beta",     "p",      "q",      "p0",      "alpha0", "l",
      "tau",    "schedule", "signal", "window", "distribution", "probe", "corpus",
      "output", "format"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) config_error("unknown key '" + it.key() + "'");

  ExperimentConfig c;
  try {
    if (j.contains("kind")) c.kind = kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("grid")) c.grid = grid_spec_from_json(j.at("grid"));
    if (j.contains("symbol")) c.symbol = j.at("symbol").get<std::string>();
    if (j.contains("mean")) c.mean = j.at("mean").get<std::string>();
    if (j.contains("theorem")) c.theorem = theorem_from_string(j.at("theorem").get<std::string>());
    if (j.contains("space")) c.space = j.at("space").get<std::string>();
    if (j.contains("via")) c.via = j.at("via").get<std::string>();
    if (j.contains("alpha")) c.alpha = number_from_json(j.at("alpha"), "alpha");
    if (j.contains("beta") && !j.at("beta").is_null()) c.beta = number_from_json(j.at("beta"), "beta");
    if (j.contains("p")) c.p = number_from_json(j.at("p"), "p");
    if (j.contains("q")) c.q = number_from_json(j.at("q"), "q");
    if (j.contains("p0")) c.p0 = number_from_json(j.at("p0"), "p0");
    if (j.contains("alpha0") && !j.at("alpha0").is_null())
      c.alpha0 = number_from_json(j.at("alpha0"), "alpha0");
    if (j.contains("l") && !j.at("l").is_null()) c.l = j.at("l").get<int>();
    if (j.contains("tau")) c.tau = number_from_json(j.at("tau"), "tau");
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      c.schedule.t0 = s.value("t0", c.schedule.t0);
      c.schedule.ratio = s.value("ratio", c.schedule.ratio);
      c.schedule.steps = s.value("steps", c.schedule.steps);
    }
    if (j.contains("signal")) c.signal = j.at("signal").get<std::string>();
    if (j.contains("window") && !j.at("window").is_null()) {
      const auto& w = j.at("window");
      WindowConfig wc;
      wc.radius = w.at("radius").get<double>();
      if (w.contains("transition") && !w.at("transition").is_null())
        wc.transition = w.at("transition").get<double>();
      c.window = wc;
    }
    if (j.contains("distribution")) c.distribution = j.at("distribution");
    if (j.contains("probe")) c.probe = j.at("probe").get<std::string>();
    if (j.contains("corpus")) {
      const auto& s = j.at("corpus");
      c.corpus_size = s.value("size", c.corpus_size);
      c.corpus_s = s.value("s", c.corpus_s);
      c.corpus_band = s.value("band", c.corpus_band);
    }
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    config_error(e.what());
  }
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"kind", to_string(c.kind)},
                   {"grid", c.grid},
                   {"symbol", c.symbol},
                   {"mean", c.mean},
                   {"theorem", to_string(c.theorem)},
                   {"space", c.space},
                   {"via", c.via},
                   {"alpha", c.alpha},
                   {"beta", c.beta ? number_to_json(*c.beta) : nlohmann::json(nullptr)},
                   {"p", number_to_json(c.p)},
                   {"q", number_to_json(c.q)},
                   {"p0", number_to_json(c.p0)},
                   {"alpha0", c.alpha0 ? nlohmann::json(*c.alpha0) : nlohmann::json(nullptr)},
                   {"l", c.l ? nlohmann::json(*c.l) : nlohmann::json(nullptr)},
                   {"tau", c.tau},
                   {"schedule",
                    {{"t0", c.schedule.t0}, {"ratio", c.schedule.ratio}, {"steps", c.schedule.steps}}},
                   {"signal", c.signal},
                   {"distribution", c.distribution},
                   {"probe", c.probe},
                   {"corpus", {{"size", c.corpus_size}, {"s", c.corpus_s}, {"band", c.corpus_band}}},
                   {"output", c.output},
                   {"format", c.format}};
  if (c.window) {
    j["window"] = {{"radius", c.window->radius},
                   {"transition", c.window->transition ? nlohmann::json(*c.window->transition)
                                                       : nlohmann::json(nullptr)}};
  } else {
    j["window"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------

bool decreasing_to_floor(const std::vector<double>& errors, double floor, bool floor_validated) {
  if (errors.empty()) return true;
  double level = kRoundoffLevel * errors.front();
  if (floor_validated) level = std::max(level, floor);
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    if (!(errors[i + 1] < errors[i]) && errors[i + 1] > level) return false;
  return true;
}

double fit_slope(const std::vector<double>& t, const std::vector<double>& errors, double floor,
                 bool floor_validated) {
  if (t.size() != errors.size()) throw std::invalid_argument("fit_slope: size mismatch");
  if (errors.empty()) return kNan;
  double threshold = kRoundoffLevel * 100.0 * errors.front();
  if (floor_validated) threshold = std::max(threshold, 10.0 * floor);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (errors[i] > threshold) {
      x.push_back(std::log(t[i]));
      y.push_back(std::log(errors[i]));
    }
  }
  if (x.size() < 2) return kNan;
  return least_squares_slope(x, y);
}

double band_truncation_error(const GridFunction& f, const NormSpec& norm) {
  const GridSpec& spec = f.spec();
  const double cut = 0.5 * spec.max_wavenumber();
  const SpectrumFunction F = forward_transform(f);
  std::vector<Complex> high(F.size());
  for (std::size_t k = 0; k < high.size(); ++k)
    high[k] = spec.wavenumber(k) > cut ? F[k] : Complex(0.0);
  return evaluate_norm(inverse_transform(SpectrumFunction(spec, std::move(high))), norm);
}

ConvergenceReport run_convergence_function(const ExperimentConfig& config) {
  config.validate();
  const MeanFunction p = parse_mean(config.mean);
  const HomogeneousSymbol sigma = parse_symbol(config.symbol);
  ConvergenceReport r;
  r.hypotheses = assemble_hypothesis_report(config.theorem, config.hypothesis_parameters(), p);

  const GridFunction u = make_signal(config.signal, config.grid);
  const auto window = build_window(config);
  const NormSpec norm = config.error_norm();
  auto measure = [&](const GridFunction& g) {
    return window ? localized_norm(g, *window, norm) : evaluate_norm(g, norm);
  };

  r.space = describe(norm);
  r.norm_route = config.space == "liouville" ? "liouville" : config.via;
  const auto ts = config.schedule.values();
  const double u_norm = measure(u);
  double bound = 0.0;
  for (double t : ts) {
    const GridFunction mean = spectral_mean(p, t, sigma, u);
    r.records.push_back({t, measure(mean - u), std::nullopt, std::nullopt});
    if (u_norm > 0.0) bound = std::max(bound, measure(mean) / u_norm);
  }
  r.uniform_bound = bound;
  r.truncation_error = band_truncation_error(window ? *window * u : u, norm);
  finish_report(r, ts);
  return r;
}

ConvergenceReport run_convergence_distribution(const ExperimentConfig& config) {
  config.validate();
  const MeanFunction p = parse_mean(config.mean);
  const HomogeneousSymbol sigma = parse_symbol(config.symbol);
  ConvergenceReport r;
  const TheoremId theorem = config.theorem == TheoremId::T2 ? TheoremId::T2 : TheoremId::T3;
  r.hypotheses = assemble_hypothesis_report(theorem, config.hypothesis_parameters(), p);

  const CompactDistribution f = distribution_of(config);
  const auto window = build_window(config);
  const GridFunction probe = make_signal(config.probe, config.grid);
  if (!f.atoms().empty()) {
    const auto membership = classify_membership(f, config.alpha, config.p, config.grid);
    r.labels.push_back("membership: " + membership.verdict);
    if (!membership.convergent)
      r.labels.push_back("atoms fall outside the negative-order space; errors need not converge");
  }
  r.labels.push_back("uniform convergence probed by the windowed sup of smooth realizations");

  const NormSpec norm = config.error_norm();
  r.space = describe(norm);
  r.norm_route = "liouville";
  const auto ts = config.schedule.values();
  for (const auto& rec :
       distribution_convergence(p, ts, sigma, f, config.alpha, config.p, config.grid, window, probe))
    r.records.push_back({rec.t, rec.error, rec.pairing_error, rec.sup_error});
  const GridFunction base = realize(f, config.grid);
  r.truncation_error = band_truncation_error(window ? *window * base : base, norm);
  finish_report(r, ts);
  return r;
}

// ---------------------------------------------------------------------------

const RatioBracket* EquivalenceReport::find(const std::string& pair) const {
  for (const auto& b : brackets)
    if (b.pair == pair) return &b;
  return nullptr;
}

EquivalenceReport run_equivalence(const ExperimentConfig& config) {
  config.validate();
  const double s = config.corpus_s;
  const BesovParams params{s, config.p, config.q};
  params.validate();
  const int dim = config.grid.dimension();
  const bool with_classical = std::isfinite(config.p) && std::isfinite(config.q);
  const bool with_nikolskii = std::isinf(config.q);
  const bool with_slobodetskii = dim == 1 && config.p == config.q && std::isfinite(config.p) &&
                                 std::floor(s) != s;
  const int m = std::max(1, static_cast<int>(std::floor(s)) + 1);

  std::vector<std::string> pairs{"modulus/lp"};
  if (with_classical) pairs.push_back("classical/lp");
  if (with_nikolskii) pairs.push_back("nikolskii/lp");
  if (with_slobodetskii) pairs.push_back("slobodetskii/lp");

  EquivalenceReport report;
  report.corpus_size = config.corpus_size;
  // ratios[level][pair][function]
  std::vector<std::vector<std::vector<double>>> ratios(
      2, std::vector<std::vector<double>>(pairs.size()));
  GridSpec grids[2] = {config.grid, config.grid.refined()};

  for (int i = 0; i < config.corpus_size; ++i) {
    const std::string id =
        "random_bandlimited:" + std::to_string(i + 1) + ":" + std::to_string(config.corpus_band);
    nlohmann::json entry{{"signal", id}};
    for (int level = 0; level < 2; ++level) {
      const GridFunction u = make_signal(id, grids[level]);
      const double lp = besov_norm_lp(u, params, *partition_for(grids[level]));
      std::vector<double> values{besov_norm_modulus(u, params, m, 0)};
      if (with_classical) values.push_back(classical_besov_norm(u, params));
      if (with_nikolskii) values.push_back(nikolskii_norm(u, s, config.p));
      if (with_slobodetskii) values.push_back(slobodetskii_norm(u, s, config.p));
      nlohmann::json norms{{"lp", lp}};
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        ratios[level][k].push_back(values[k] / lp);
        norms[pairs[k].substr(0, pairs[k].find('/'))] = values[k];
      }
      entry[level == 0 ? "norms" : "norms_refined"] = norms;
      if (level == 0) {
        const double liou = liouville_norm(u, 1.0, 2.0);
        const double sob = sobolev_norm(u, 1, 2.0, SobolevCombine::euclidean);
        report.liouville_sobolev_deviation =
            std::max(report.liouville_sobolev_deviation, std::abs(liou / sob - 1.0));
      }
    }
    report.per_function.push_back(entry);
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    RatioBracket b;
    b.pair = pairs[k];
    const auto [lo, hi] = std::minmax_element(ratios[0][k].begin(), ratios[0][k].end());
    const auto [lo2, hi2] = std::minmax_element(ratios[1][k].begin(), ratios[1][k].end());
    b.min = *lo;
    b.max = *hi;
    b.bracket = *hi / *lo;
    b.bracket_refined = *hi2 / *lo2;
    b.stability = b.bracket_refined / b.bracket;
    report.brackets.push_back(b);
  }
  return report;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.records) {
    nlohmann::json e{{"t", rec.t}, {"error", number_to_json(rec.error)}};
    if (rec.pairing_error) e["pairing_error"] = number_to_json(*rec.pairing_error);
    if (rec.sup_error) e["sup_error"] = number_to_json(*rec.sup_error);
    records.push_back(e);
  }
  nlohmann::json j{{"space", r.space},
                   {"norm_route", r.norm_route},
                   {"records", records},
                   {"monotone", r.monotone},
                   {"slope", number_to_json(r.slope)},
                   {"floor", number_to_json(r.floor)},
                   {"floor_validated", r.floor_validated},
                   {"truncation_error", number_to_json(r.truncation_error)},
                   {"hypotheses", to_json(r.hypotheses)},
                   {"labels", r.labels}};
  j["uniform_bound"] = r.uniform_bound ? number_to_json(*r.uniform_bound) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EquivalenceReport& r) {
  nlohmann::json brackets = nlohmann::json::array();
  for (const auto& b : r.brackets) {
    brackets.push_back({{"pair", b.pair},
                        {"min", b.min},
                        {"max", b.max},
                        {"bracket", b.bracket},
                        {"bracket_refined", b.bracket_refined},
                        {"stability", b.stability}});
  }
  return {{"corpus_size", r.corpus_size},
          {"brackets", brackets},
          {"liouville_sobolev_deviation", r.liouville_sobolev_deviation},
          {"per_function", r.per_function}};
}

std::string to_csv(const ConvergenceReport& r) {
  std::string out = "t,error,space,norm_route,monotone,slope,floor\n";
  for (const auto& rec : r.records) {
    out += g17(rec.t) + "," + g17(rec.error) + "," + r.space + "," + r.norm_route + "," +
           (r.monotone ? "true" : "false") + "," + g17(r.slope) + "," + g17(r.floor) + "\n";
  }
  return out;
}

std::string to_csv(const EquivalenceReport& r) {
  std::string out = "pair,min,max,bracket,bracket_refined,stability\n";
  for (const auto& b : r.brackets) {
    out += b.pair + "," + g17(b.min) + "," + g17(b.max) + "," + g17(b.bracket) + "," +
           g17(b.bracket_refined) + "," + g17(b.stability) + "\n";
  }
  return out;
}

}  // namespace smeans
