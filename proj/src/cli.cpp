#include "smeans/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "smeans/experiment.hpp"
#include "smeans/function_spaces.hpp"
#include "smeans/multiplier_ops.hpp"
#include "smeans/signals.hpp"

namespace smeans {

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> t0, ratio, alpha, beta, p, q, p0, alpha0, tau, window, t, m;
  std::optional<int> steps, N, l;
  std::optional<std::string> grid, mean, symbol, signal, space, via, out, format, theorem, probe;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON configuration file");
  app->add_option("--grid", o.grid, "grid as N:n:L");
  app->add_option("--N", o.N, "dimension");
  app->add_option("--m", o.m, "symbol degree (|y|^m)");
  app->add_option("--mean", o.mean, "gaussian | riesz:s | cutoff:tau | unit");
  app->add_option("--symbol", o.symbol, "abs:m | quartic");
  app->add_option("--theorem", o.theorem, "T1 | T2 | T3");
  app->add_option("--alpha", o.alpha, "smoothness alpha");
  app->add_option("--beta", o.beta, "smoothness beta");
  app->add_option("--p", o.p, "integrability exponent p");
  app->add_option("--q", o.q, "Besov exponent q");
  app->add_option("--p0", o.p0, "exponent p0");
  app->add_option("--alpha0", o.alpha0, "alpha0");
  app->add_option("--l", o.l, "number of controlled derivatives");
  app->add_option("--tau", o.tau, "continuity window for T2");
  app->add_option("--t0", o.t0, "first t of the schedule");
  app->add_option("--ratio", o.ratio, "geometric ratio of the schedule");
  app->add_option("--steps", o.steps, "number of t values");
  app->add_option("--signal", o.signal, "signal id");
  app->add_option("--probe", o.probe, "probe signal for distribution pairings");
  app->add_option("--space", o.space, "space (converge) or norm spec (norm)");
  app->add_option("--via", o.via, "Besov route: lp | modulus | classical");
  app->add_option("--window", o.window, "window radius");
  app->add_option("--t", o.t, "t for apply");
  app->add_option("--out", o.out, "output path (stdout if absent)");
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

GridSpec parse_grid(const std::string& s) {
  int N = 0, n = 0;
  double L = 0.0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%d:%d:%lf%c", &N, &n, &L, &extra) != 3)
    throw std::invalid_argument("config: --grid must be N:n:L");
  return GridSpec(N, n, L);
}

ExperimentConfig build_config(const Overrides& o, ExperimentKind kind) {
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("config: cannot open " + o.config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c = config_from_json(j);
  }
  c.kind = kind;
  if (o.grid) c.grid = parse_grid(*o.grid);
  if (o.N) c.grid = GridSpec(*o.N, c.grid.points_per_axis(), c.grid.period());
  if (o.m) {
    std::ostringstream os;
    os << "abs:" << *o.m;
    c.symbol = os.str();
  }
  if (o.symbol) c.symbol = *o.symbol;
  if (o.mean) c.mean = *o.mean;
  if (o.theorem) c.theorem = config_from_json({{"theorem", *o.theorem}}).theorem;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.beta) c.beta = *o.beta;
  if (o.p) c.p = *o.p;
  if (o.q) c.q = *o.q;
  if (o.p0) c.p0 = *o.p0;
  if (o.alpha0) c.alpha0 = *o.alpha0;
  if (o.l) c.l = *o.l;
  if (o.tau) c.tau = *o.tau;
  if (o.t0) c.schedule.t0 = *o.t0;
  if (o.ratio) c.schedule.ratio = *o.ratio;
  if (o.steps) c.schedule.steps = *o.steps;
  if (o.signal) c.signal = *o.signal;
  if (o.probe) c.probe = *o.probe;
  if (o.space && kind != ExperimentKind::conditions) c.space = *o.space;
  if (o.via) c.via = *o.via;
  if (o.window) c.window = WindowConfig{*o.window, std::nullopt};
  if (o.out) c.output = *o.out;
  if (o.format) c.format = *o.format;
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("config: cannot write " + path);
  out << text;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_converge(const Overrides& o, bool distribution) {
  ExperimentConfig c = build_config(
      o, distribution ? ExperimentKind::converge_distribution : ExperimentKind::converge_function);
  const ConvergenceReport r =
      distribution ? run_convergence_distribution(c) : run_convergence_function(c);
  emit(c.format == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n", c.output);
  if (r.regression()) {
    std::cerr << "monotone-decay assertion violated on a hypothesis-passing run\n";
    return kExitMonotoneViolation;
  }
  return kExitOk;
}

int run_equivalence_cmd(const Overrides& o) {
  ExperimentConfig c = build_config(o, ExperimentKind::equivalence);
  const EquivalenceReport r = run_equivalence(c);
  emit(c.format == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n", c.output);
  return kExitOk;
}

int run_conditions(const Overrides& o) {
  ExperimentConfig c = build_config(o, ExperimentKind::conditions);
  c.validate();
  const MeanFunction p = parse_mean(c.mean);
  const HypothesisParameters h = c.hypothesis_parameters();
  HypothesisReport r = assemble_hypothesis_report(c.theorem, h, p);
  if (!c.beta) r.notes.push_back("beta defaulted to alpha0 + alpha + epsilon");
  emit(to_json(r).dump(2) + "\n", c.output);
  return kExitOk;
}

int run_norm(const Overrides& o) {
  ExperimentConfig c = build_config(o, ExperimentKind::conditions);
  const NormSpec spec = parse_norm_spec(o.space.value_or("lp:2"), o.via.value_or("lp"));
  const GridFunction u = make_signal(c.signal, c.grid);
  nlohmann::json trace = nlohmann::json::object();
  const double value = evaluate_norm(u, spec, &trace);
  const nlohmann::json j{{"space", describe(spec)}, {"signal", c.signal}, {"value", value},
                         {"trace", trace}};
  if (o.format && *o.format == "csv") {
    emit("space,value\n" + describe(spec) + "," + g17(value) + "\n", c.output);
  } else {
    emit(g17(value) + "\n" + j.dump(2) + "\n", c.output);
  }
  return kExitOk;
}

int run_apply(const Overrides& o) {
  ExperimentConfig c = build_config(o, ExperimentKind::conditions);
  if (!o.t) throw std::invalid_argument("config: apply needs --t");
  const MeanFunction p = parse_mean(c.mean);
  const HomogeneousSymbol sigma = parse_symbol(c.symbol);
  const GridFunction u = make_signal(c.signal, c.grid);
  const GridFunction v = spectral_mean(p, *o.t, sigma, u);
  if (c.format == "json") {
    emit(to_json(v).dump() + "\n", c.output);
    return kExitOk;
  }
  const int dim = c.grid.dimension();
  std::string text;
  for (int d = 0; d < dim; ++d) text += "x" + std::to_string(d) + ",";
  text += "re,im\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point x = c.grid.point(i);
    for (int d = 0; d < dim; ++d) text += g17(x[d]) + ",";
    text += g17(v[i].real()) + "," + g17(v[i].imag()) + "\n";
  }
  emit(text, c.output);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Spectral means, function-space norms and convergence experiments", "smeans"};
  app.require_subcommand(1);
  Overrides o;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"converge", "convergence sweep for a function"},
      {"converge-dist", "convergence sweep for a compactly supported distribution"},
      {"equivalence", "ratios between equivalent Besov norms on a random corpus"},
      {"conditions", "hypothesis report for a mean"},
      {"norm", "norm of a signal"},
      {"apply", "apply p(tA) to a signal"},
  };
  for (const auto& cmd : commands) add_common(app.add_subcommand(cmd.name, cmd.help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfigError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "converge") return run_converge(o, false);
    if (name == "converge-dist") return run_converge(o, true);
    if (name == "equivalence") return run_equivalence_cmd(o);
    if (name == "conditions") return run_conditions(o);
    if (name == "norm") return run_norm(o);
    return run_apply(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace smeans
