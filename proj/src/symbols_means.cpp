#include "smeans/symbols_means.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "detail/smooth_step.hpp"

namespace smeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double norm_of(std::span<const double> y) {
  double s = 0.0;
  for (double c : y) s += c * c;
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// HomogeneousSymbol

HomogeneousSymbol::HomogeneousSymbol(double degree, Evaluator evaluate,
                                     std::string label, int dimension)
    : degree_(degree), evaluate_(std::move(evaluate)), label_(std::move(label)),
      dimension_(dimension) {
  if (!(degree >= 1.0) || !std::isfinite(degree))
    throw std::invalid_argument("HomogeneousSymbol: degree must be >= 1");
  if (!evaluate_) throw std::invalid_argument("HomogeneousSymbol: empty evaluator");
}

HomogeneousSymbol HomogeneousSymbol::power_of_norm(double m) {
  return HomogeneousSymbol(
      m, [m](std::span<const double> y) { return std::pow(norm_of(y), m); },
      "|y|^" + format_number(m));
}

HomogeneousSymbol HomogeneousSymbol::quartic_2d() {
  return HomogeneousSymbol(
      4.0,
      [](std::span<const double> y) {
        return y[0] * y[0] * y[0] * y[0] + y[1] * y[1] * y[1] * y[1];
      },
      "y1^4+y2^4", 2);
}

double HomogeneousSymbol::operator()(std::span<const double> y) const {
  if (dimension_ != 0 && static_cast<int>(y.size()) != dimension_)
    throw std::invalid_argument("HomogeneousSymbol " + label_ + ": wrong dimension");
  bool zero = std::all_of(y.begin(), y.end(), [](double c) { return c == 0.0; });
  return zero ? 0.0 : evaluate_(y);
}

double HomogeneousSymbol::operator()(const Point& y, int dimension) const {
  return (*this)(std::span<const double>(y.data(), static_cast<std::size_t>(dimension)));
}

SymbolValidation validate_symbol(const HomogeneousSymbol& sigma, int dimension,
                                 int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);

  SymbolValidation out;
  out.ellipticity_constant = kInf;
  std::vector<double> y(dimension), ly(dimension);
  for (int s = 0; s < samples; ++s) {
    double r = 0.0;
    do {
      for (auto& c : y) c = gauss(rng);
      r = norm_of(y);
    } while (r < 1e-8);
    for (auto& c : y) c /= r;
    const double unit = sigma(y);
    out.ellipticity_constant = std::min(out.ellipticity_constant, unit);

    const double lambda = std::pow(10.0, log_scale(rng));
    for (int d = 0; d < dimension; ++d) ly[d] = lambda * y[d];
    const double expected = std::pow(lambda, sigma.degree()) * unit;
    const double err = std::abs(sigma(ly) - expected) / std::abs(expected);
    out.max_homogeneity_error = std::max(out.max_homogeneity_error, err);
  }
  out.homogeneous = out.max_homogeneity_error <= 1e-10;
  out.elliptic = out.ellipticity_constant > 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// MeanFunction

MeanFunction::MeanFunction(Profile profile, ClosedFormDerivative derivative,
                           std::string label)
    : profile_(std::move(profile)), closed_form_(std::move(derivative)),
      label_(std::move(label)) {
  if (!profile_) throw std::invalid_argument("MeanFunction: empty profile");
  if (profile_(0.0) != 1.0)
    throw std::invalid_argument("MeanFunction " + label_ + ": p(0) must equal 1");
}

std::optional<double> MeanFunction::closed_form_derivative(int order, double lambda) const {
  if (order == 0) return profile_(lambda);
  if (!closed_form_) return std::nullopt;
  return closed_form_(order, lambda);
}

double MeanFunction::derivative(int order, double lambda) const {
  if (order < 0) throw std::invalid_argument("MeanFunction: negative derivative order");
  if (auto exact = closed_form_derivative(order, lambda)) return *exact;

  // Fourth-order stencils; step balances truncation against roundoff.
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (std::min(order, 4) + 4)) *
                   (1.0 + std::abs(lambda));
  auto f = [&](double k) { return profile_(lambda + k * h); };
  switch (order) {
    case 1:
      return (-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h);
    case 2:
      return (-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h);
    case 3:
      return (-f(3) + 8 * f(2) - 13 * f(1) + 13 * f(-1) - 8 * f(-2) + f(-3)) /
             (8 * h * h * h);
    case 4:
      return (-f(3) + 12 * f(2) - 39 * f(1) + 56 * f(0) - 39 * f(-1) + 12 * f(-2) -
              f(-3)) /
             (6 * h * h * h * h);
    default: {
      // Higher orders: first-derivative stencil applied to order - 1.
      auto g = [&](double k) { return derivative(order - 1, lambda + k * h); };
      return (-g(2) + 8 * g(1) - 8 * g(-1) + g(-2)) / (12 * h);
    }
  }
}

MeanFunction MeanFunction::rescaled(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("MeanFunction::rescaled: t must be positive");
  Profile base = profile_;
  ClosedFormDerivative cf = closed_form_;
  ClosedFormDerivative scaled;
  if (cf) {
    scaled = [cf, t](int j, double lambda) -> std::optional<double> {
      auto v = cf(j, t * lambda);
      if (!v) return std::nullopt;
      return std::pow(t, j) * *v;
    };
  }
  return MeanFunction([base, t](double lambda) { return base(t * lambda); },
                      std::move(scaled), label_ + "@t=" + format_number(t));
}

MeanFunction make_riesz_mean(double s) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw std::invalid_argument("make_riesz_mean: order s must be >= 0");
  auto profile = [s](double z) {
    const double a = std::abs(z);
    if (a > 1.0) return 0.0;
    return s == 0.0 ? 1.0 : std::pow(1.0 - a, s);
  };
  auto derivative = [s](int j, double lambda) -> std::optional<double> {
    if (lambda < 0.0 || static_cast<double>(j) > s) return std::nullopt;
    if (lambda > 1.0) return 0.0;
    // (-1)^j s (s-1) ... (s-j+1) (1-lambda)^(s-j)
    double coeff = 1.0;
    for (int i = 0; i < j; ++i) coeff *= -(s - i);
    const double e = s - j;
    return coeff * (e == 0.0 ? 1.0 : std::pow(1.0 - lambda, e));
  };
  return MeanFunction(profile, derivative, "riesz:" + format_number(s));
}

MeanFunction make_gaussian_mean() {
  return MeanFunction([](double lambda) { return std::exp(-lambda); },
                      [](int j, double lambda) -> std::optional<double> {
                        return (j % 2 == 0 ? 1.0 : -1.0) * std::exp(-lambda);
                      },
                      "gaussian");
}

MeanFunction make_smooth_cutoff_mean(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("make_smooth_cutoff_mean: tau must be positive");
  const double half = 0.5 * tau;
  auto profile = [half](double lambda) {
    return 1.0 - detail::bump_primitive((std::abs(lambda) - half) / half);
  };
  auto derivative = [half](int j, double lambda) -> std::optional<double> {
    if (lambda < 0.0) return std::nullopt;
    const double u = (lambda - half) / half;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return -detail::bump_primitive_derivative(u, j) / std::pow(half, j);
  };
  return MeanFunction(profile, derivative, "cutoff:" + format_number(tau));
}

MeanFunction make_unit_mean() {
  return MeanFunction([](double) { return 1.0; },
                      [](int, double) -> std::optional<double> { return 0.0; }, "unit");
}

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}
}  // namespace

MeanFunction parse_mean(const std::string& id) {
  auto parts = split(id, ':');
  if (parts.empty()) throw std::invalid_argument("empty mean id");
  const std::string& kind = parts[0];
  if (kind == "gaussian" && parts.size() == 1) return make_gaussian_mean();
  if (kind == "unit" && parts.size() == 1) return make_unit_mean();
  if (kind == "riesz" && parts.size() == 2) return make_riesz_mean(std::stod(parts[1]));
  if (kind == "cutoff" && parts.size() == 2)
    return make_smooth_cutoff_mean(std::stod(parts[1]));
  throw std::invalid_argument("unknown mean id '" + id + "'");
}

HomogeneousSymbol parse_symbol(const std::string& id) {
  auto parts = split(id, ':');
  if (parts.size() == 2 && parts[0] == "abs")
    return HomogeneousSymbol::power_of_norm(std::stod(parts[1]));
  if (parts.size() == 1 && parts[0] == "quartic") return HomogeneousSymbol::quartic_2d();
  throw std::invalid_argument("unknown symbol id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Hypothesis checkers

IntegrabilityResult check_integrability(const MeanFunction& p, int dimension,
                                        double alpha0, double degree) {
  if (dimension < 1) throw std::invalid_argument("check_integrability: N must be >= 1");
  if (!(degree >= 1.0)) throw std::invalid_argument("check_integrability: m must be >= 1");

  IntegrabilityResult out;
  out.exponent = (dimension - alpha0 - 1.0) / degree;
  if (out.exponent <= -1.0) {
    out.finite = false;
    out.value = kInf;
    out.reason = "divergence at 0";
    return out;
  }

  const double e = out.exponent;
  auto integrand = [&](double lambda) {
    return std::abs(p(lambda)) * std::pow(lambda, e);
  };

  boost::math::quadrature::tanh_sinh<double> near_zero;
  double value = near_zero.integrate(integrand, 0.0, 1.0);
  for (double a = 1.0; a < 1e3; a *= 10.0) {
    value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, a, 10.0 * a, 15, 1e-12);
  }
  out.value = value;

  // Empirical decay exponent of |p| on [1e3, 4e3].
  constexpr double kLambda = 1e3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int i = 0; i <= 16; ++i) {
    const double lambda = kLambda * std::pow(4.0, i / 16.0);
    const double v = std::abs(p(lambda));
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    const double x = std::log(lambda), y = std::log(v);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  if (count < 2) {
    out.decay_exponent = kInf;
  } else {
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    out.decay_exponent = -slope;
  }
  out.finite = out.decay_exponent > e + 1.0 + 0.1;
  out.reason = out.finite ? "tail decays faster than lambda^-(1+exponent)"
                          : "tail decay too slow";
  return out;
}

namespace {

std::vector<double> log_grid(double lo_exp, double hi_exp, int per_decade,
                             bool include_zero) {
  std::vector<double> g;
  if (include_zero) g.push_back(0.0);
  const int count = static_cast<int>(std::lround((hi_exp - lo_exp) * per_decade));
  for (int i = 0; i <= count; ++i)
    g.push_back(std::pow(10.0, lo_exp + static_cast<double>(i) / per_decade));
  return g;
}

// Largest jump between neighbouring samples of f on a uniform grid of
// `points` nodes over [a, b].
double max_adjacent_jump(const std::function<double(double)>& f, double a, double b,
                         int points) {
  double jump = 0.0;
  double prev = f(a);
  for (int i = 1; i < points; ++i) {
    const double cur = f(a + (b - a) * i / (points - 1));
    const double d = std::abs(cur - prev);
    if (!std::isfinite(d)) return kInf;
    jump = std::max(jump, d);
    prev = cur;
  }
  return jump;
}

// A function is taken as continuous on [a,b] when its largest adjacent jump
// shrinks under grid refinement (or is already below `floor`).
bool continuous_by_refinement(const std::function<double(double)>& f, double a,
                              double b, int points, double floor, double* jump) {
  const double coarse = max_adjacent_jump(f, a, b, points);
  const double fine = max_adjacent_jump(f, a, b, 2 * points - 1);
  if (jump) *jump = fine;
  if (!std::isfinite(fine)) return false;
  return fine <= floor || fine <= 0.8 * coarse;
}

}  // namespace

DerivativeDecayResult check_derivative_decay(const MeanFunction& p, int l) {
  if (l < 0) throw std::invalid_argument("check_derivative_decay: l must be >= 0");
  DerivativeDecayResult out;
  const auto grid = log_grid(-4.0, 6.0, 100, true);
  std::ostringstream diag;
  bool pass = true;

  for (int j = 0; j <= l; ++j) {
    double sup_low = 0.0, sup_all = 0.0;
    bool finite = true;
    for (double lambda : grid) {
      const double v = std::abs(p.derivative(j, lambda)) * std::pow(1.0 + lambda, j);
      if (!std::isfinite(v)) { finite = false; break; }
      sup_all = std::max(sup_all, v);
      if (lambda <= 1e4) sup_low = std::max(sup_low, v);
    }
    if (!finite) {
      out.constants.push_back(kInf);
      diag << "j=" << j << ": derivative evaluation not finite; ";
      pass = false;
      continue;
    }
    out.constants.push_back(sup_all);
    if (sup_all > sup_low * (1.0 + 1e-6) + 1e-12) {
      diag << "j=" << j << ": C_j grows over the last two decades; ";
      pass = false;
    }
    // p in C^l: each derivative up to order l must be continuous.
    double jump = 0.0;
    auto dj = [&](double lambda) { return p.derivative(j, lambda); };
    if (!continuous_by_refinement(dj, 0.0, 16.0, 16001, 1e-6, &jump)) {
      diag << "j=" << j << ": derivative discontinuous (jump " << format_number(jump)
           << "); ";
      pass = false;
    }
  }
  out.pass = pass;
  out.diagnostic = pass ? "ok" : diag.str();
  return out;
}

Theorem2Check check_theorem2(const MeanFunction& p, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("check_theorem2: tau must be positive");
  Theorem2Check out;
  out.unit_at_zero = p(0.0) == 1.0;

  double sup_low = 0.0, sup_all = 0.0;
  bool finite = true;
  auto grid = log_grid(-6.0, 6.0, 400, true);
  for (int i = 0; i <= 1000; ++i) grid.push_back(tau * i / 1000.0);
  for (double lambda : grid) {
    const double v = std::abs(p(lambda));
    if (!std::isfinite(v)) { finite = false; break; }
    sup_all = std::max(sup_all, v);
    if (lambda <= 1e5) sup_low = std::max(sup_low, v);
  }
  out.sup = finite ? sup_all : kInf;
  out.bounded = finite && sup_all <= 1e8 && sup_all <= sup_low * (1.0 + 1e-6) + 1e-12;

  auto f = [&](double lambda) { return p(lambda); };
  out.continuous = continuous_by_refinement(f, 0.0, tau, 10000, 1e-6, &out.max_jump);
  out.pass = out.unit_at_zero && out.bounded && out.continuous;
  out.note =
      "continuity checked on the closed interval [0, tau]; the distribution "
      "variant of the statement uses [0, tau)";
  return out;
}

// ---------------------------------------------------------------------------

bool HypothesisReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionLine& c) { return c.pass || c.informational; });
}

const ConditionLine* HypothesisReport::find(const std::string& condition) const {
  for (const auto& c : checks)
    if (c.condition == condition) return &c;
  return nullptr;
}

std::string to_string(TheoremId theorem) {
  switch (theorem) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3: return "T3";
  }
  return "?";
}

HypothesisReport assemble_hypothesis_report(TheoremId theorem,
                                            const HypothesisParameters& prm,
                                            const MeanFunction& p) {
  auto bad = [](const std::string& what) {
    throw std::invalid_argument("hypothesis parameters: " + what);
  };
  if (prm.N < 1) bad("N must be >= 1");
  if (!(prm.m >= 1.0)) bad("m must be >= 1");
  if (!(prm.p >= 1.0) || !(prm.p0 >= 1.0)) bad("p and p0 must be >= 1");
  if (!(prm.q >= 1.0)) bad("q must be >= 1");
  if (prm.l < 0) bad("l must be >= 0");
  if (!std::isfinite(prm.alpha) || !std::isfinite(prm.beta)) bad("alpha, beta must be finite");
  if (!(prm.tau > 0.0)) bad("tau must be positive");

  HypothesisReport r;
  r.theorem = theorem;
  r.parameters = prm;
  const double N = prm.N;
  const double eps = N * (1.0 / prm.p - 1.0 / prm.p0);
  if (prm.epsilon && std::abs(*prm.epsilon - eps) > 1e-12 * std::max(1.0, std::abs(eps)))
    bad("epsilon must equal N(1/p - 1/p0)");
  r.epsilon = eps;

  const bool t1_family = theorem != TheoremId::T2;
  if (t1_family) {
    r.alpha0 = prm.alpha0.value_or(N / prm.p0);
  } else {
    if (!prm.alpha0) bad("alpha0 is required for T2");
    r.alpha0 = *prm.alpha0;
  }
  const double a0 = r.alpha0;
  auto add = [&](std::string c, std::string f, double lhs, double rhs, bool pass) {
    r.checks.push_back({std::move(c), std::move(f), lhs, rhs, pass});
  };

  add("p(0) = 1", "p(0) = 1", p(0.0), 1.0, p(0.0) == 1.0);
  const double balance = a0 + prm.alpha + eps;

  if (t1_family) {
    auto integ = check_integrability(p, prm.N, a0, prm.m);
    add("integrability", "int_0^inf |p(l)| l^((N-alpha0-1)/m) dl < inf", integ.value,
        integ.exponent + 1.1, integ.finite);
    if (!integ.finite) r.notes.push_back("integrability: " + integ.reason);

    auto decay = check_derivative_decay(p, prm.l);
    double cmax = 0.0;
    for (double c : decay.constants) cmax = std::max(cmax, c);
    add("derivative decay", "|p^(j)(l)| <= C_j (1+l)^-j, j = 0..l", cmax, prm.l,
        decay.pass);
    if (!decay.pass) r.notes.push_back("derivative decay: " + decay.diagnostic);

    const double lmin = N * (0.5 - 1.0 / prm.p0);
    add("l > N(1/2 - 1/p0)", "l > N(1/2 - 1/p0)", prm.l, lmin, prm.l > lmin);
    add("alpha0 = N/p0", "alpha0 = N/p0", a0, N / prm.p0,
        std::abs(a0 - N / prm.p0) <= 1e-12);
    add("alpha >= 0", "alpha >= 0", prm.alpha, 0.0, prm.alpha >= 0.0);
    add("2 <= p <= p0 < inf", "2 <= p <= p0 < inf", prm.p, prm.p0,
        prm.p >= 2.0 && prm.p <= prm.p0 && std::isfinite(prm.p0));
  } else {
    auto t2 = check_theorem2(p, prm.tau);
    add("p bounded and continuous", "p in L_inf[0,inf) and C[0,tau]", t2.sup, prm.tau,
        t2.bounded && t2.continuous);
    r.notes.push_back(t2.note);
    add("alpha0 > N/p0", "alpha0 > N/p0", a0, N / prm.p0, a0 > N / prm.p0);
    add("alpha >= 0", "alpha >= 0", prm.alpha, 0.0, prm.alpha >= 0.0);
    const bool range = (prm.p > 1.0 && prm.p <= prm.p0 && prm.p0 <= 2.0) ||
                       (prm.p == 1.0 && prm.p0 == 1.0);
    add("1 < p <= p0 <= 2 or p = p0 = 1", "1 < p <= p0 <= 2 or p = p0 = 1", prm.p,
        prm.p0, range);
  }
  add("epsilon = N(1/p - 1/p0)", "epsilon = N(1/p - 1/p0)", eps, eps, true);
  add("beta >= alpha0 + alpha + epsilon", "beta >= alpha0 + alpha + epsilon", prm.beta,
      balance, prm.beta >= balance - 1e-12);
  if (theorem == TheoremId::T3) {
    // Both beta directions are recorded; neither gates the run.
    r.checks.back().informational = true;
    const double reverse = prm.alpha - a0 - eps;
    add("beta <= alpha - alpha0 - epsilon", "beta <= alpha - alpha0 - epsilon", prm.beta,
        reverse, prm.beta <= reverse + 1e-12);
    r.checks.back().informational = true;
    r.notes.push_back("beta: both inequality directions recorded, neither enforced");
  }
  add("1 <= q < inf", "1 <= q < inf", prm.q, kInf, prm.q >= 1.0 && std::isfinite(prm.q));
  return r;
}

nlohmann::json to_json(const HypothesisReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  };
  for (const auto& c : report.checks) {
    checks.push_back({{"condition", c.condition},
                      {"formula", c.formula},
                      {"lhs", num(c.lhs)},
                      {"rhs", num(c.rhs)},
                      {"pass", c.pass},
                      {"informational", c.informational}});
  }
  const auto& p = report.parameters;
  return {{"theorem", to_string(report.theorem)},
          {"parameters",
           {{"N", p.N}, {"m", p.m}, {"p", p.p}, {"p0", p.p0}, {"alpha", p.alpha},
            {"alpha0", report.alpha0}, {"epsilon", report.epsilon}, {"beta", p.beta},
            {"l", p.l}, {"q", num(p.q)}, {"tau", p.tau}}},
          {"checks", checks},
          {"notes", report.notes},
          {"all_pass", report.all_pass()}};
}

}  // namespace smeans
