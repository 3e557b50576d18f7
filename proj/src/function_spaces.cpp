#include "smeans/function_spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "detail/smooth_step.hpp"
#include "smeans/multiplier_ops.hpp"

namespace smeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNodesPerDecade = 64;

void require_exponent(double p, const char* what) {
  if (std::isnan(p) || p < 1.0)
    throw std::invalid_argument(std::string(what) + ": exponent must be >= 1");
}

double binomial(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

// L_p norm of Delta_y^m g without materializing a GridFunction.
double difference_norm(const GridFunction& g, const LatticeIndex& steps, int order, double p) {
  const GridSpec& spec = g.spec();
  std::vector<double> coeff(order + 1);
  for (int k = 0; k <= order; ++k) coeff[k] = (k % 2 ? -1.0 : 1.0) * binomial(order, k);

  std::vector<double> mag(g.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const LatticeIndex base = spec.unravel(i);
    Complex acc = 0.0;
    for (int k = 0; k <= order; ++k) {
      LatticeIndex idx{base[0] + k * steps[0], base[1] + k * steps[1], base[2] + k * steps[2]};
      acc += coeff[k] * g[spec.ravel_wrapped(idx)];
    }
    mag[i] = std::abs(acc);
    peak = std::max(peak, mag[i]);
  }
  if (std::isinf(p) || peak == 0.0) return peak;
  double sum = 0.0;
  for (double v : mag) sum += std::pow(v / peak, p);
  return peak * std::pow(sum * spec.cell_volume(), 1.0 / p);
}

double combine_q(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double peak = 0.0;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(t / peak, q);
  return peak * std::pow(sum, 1.0 / q);
}

LatticeIndex axis_index(int axis, int order) {
  LatticeIndex a{0, 0, 0};
  a[axis] = order;
  return a;
}

std::span<const int> as_span(const LatticeIndex& a, int dim) {
  return std::span<const int>(a.data(), static_cast<std::size_t>(dim));
}

double sobolev_part(const GridFunction& f, int order, double p, SobolevCombine combine) {
  const int dim = f.spec().dimension();
  double total = 0.0;
  for (int k = 0; k <= order; ++k) {
    for (const auto& alpha : multi_indices(dim, k)) {
      const double v = lp_norm(spectral_derivative(f, as_span(alpha, dim)), p);
      total += combine == SobolevCombine::sum ? v : v * v;
    }
  }
  return combine == SobolevCombine::sum ? total : std::sqrt(total);
}

// Primitive integer directions with first nonzero component positive.
std::vector<LatticeIndex> primitive_directions(int dim) {
  std::vector<LatticeIndex> dirs;
  if (dim == 1) return {LatticeIndex{1, 0, 0}};
  const int K = dim == 2 ? 3 : 2;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = (dim == 3 ? -K : 0); c <= (dim == 3 ? K : 0); ++c) {
        LatticeIndex v{a, b, c};
        int first = a != 0 ? a : (b != 0 ? b : c);
        if (first <= 0) continue;
        if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
        dirs.push_back(v);
      }
  return dirs;
}

std::vector<double> direction_weights(const std::vector<LatticeIndex>& dirs, int dim) {
  const double pi = std::numbers::pi;
  if (dim == 1) return {2.0};
  if (dim == 3) return std::vector<double>(dirs.size(), 4.0 * pi / dirs.size());
  // 2D: angular Voronoi cells on the half circle, doubled for antipodes.
  std::vector<std::pair<double, std::size_t>> ang;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double th = std::atan2(static_cast<double>(dirs[i][1]), static_cast<double>(dirs[i][0]));
    if (th < 0) th += pi;
    if (th >= pi) th -= pi;
    ang.emplace_back(th, i);
  }
  std::sort(ang.begin(), ang.end());
  std::vector<double> w(dirs.size());
  const std::size_t n = ang.size();
  for (std::size_t i = 0; i < n; ++i) {
    double prev = ang[(i + n - 1) % n].first, next = ang[(i + 1) % n].first;
    double gap_prev = ang[i].first - prev, gap_next = next - ang[i].first;
    if (gap_prev <= 0) gap_prev += pi;
    if (gap_next <= 0) gap_next += pi;
    w[ang[i].second] = (gap_prev + gap_next);  // half-gaps, doubled
  }
  return w;
}

double direction_length(const LatticeIndex& v) {
  return std::sqrt(static_cast<double>(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
}

// Lattice multiples j of each direction, either all j or log-spaced (64 per
// decade) snapped to integers.
std::vector<ShiftSample> shifts_along_directions(const GridSpec& spec, double max_length,
                                                 bool log_snapped) {
  const int dim = spec.dimension();
  const auto dirs = primitive_directions(dim);
  const auto weights = direction_weights(dirs, dim);
  const double h = spec.spacing();
  std::vector<ShiftSample> out;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const double unit = direction_length(dirs[d]) * h;
    const int jmax = static_cast<int>(std::floor(max_length / unit + 1e-9));
    if (jmax < 1) continue;
    std::vector<int> js;
    if (!log_snapped) {
      for (int j = 1; j <= jmax; ++j) js.push_back(j);
    } else {
      const int count = static_cast<int>(std::ceil(std::log10(jmax) * kNodesPerDecade));
      for (int i = 0; i <= count; ++i) {
        int j = static_cast<int>(std::lround(std::pow(10.0, static_cast<double>(i) / kNodesPerDecade)));
        j = std::clamp(j, 1, jmax);
        if (js.empty() || js.back() != j) js.push_back(j);
      }
      if (js.back() != jmax) js.push_back(jmax);
    }
    for (int j : js) {
      ShiftSample s;
      s.steps = {j * dirs[d][0], j * dirs[d][1], j * dirs[d][2]};
      s.length = j * unit;
      s.direction_weight = weights[d];
      s.direction = static_cast<int>(d);
      out.push_back(s);
    }
  }
  return out;
}

// Product quadrature of int G(r) r^(-a-1) dr over the node range, with G
// linear between nodes: positive weights per node.
std::vector<double> product_weights(const std::vector<double>& r, double a) {
  static const std::array<double, 8> x = {-0.9602898564975363, -0.7966664774136267,
                                          -0.5255324099163290, -0.1834346424956498,
                                          0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
  static const std::array<double, 8> w = {0.1012285362903763, 0.2223810344533745,
                                          0.3137066458778873, 0.3626837833783620,
                                          0.3626837833783620, 0.3137066458778873,
                                          0.2223810344533745, 0.1012285362903763};
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double lo = r[i], hi = r[i + 1], half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int g = 0; g < 8; ++g) {
      const double rr = mid + half * x[g];
      const double kernel = std::pow(rr, -a - 1.0) * w[g] * half;
      const double lam = (rr - lo) / (hi - lo);
      out[i] += kernel * (1.0 - lam);
      out[i + 1] += kernel * lam;
    }
  }
  return out;
}

std::string num(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  return std::stod(s);
}

}  // namespace

// ---------------------------------------------------------------------------

void BesovParams::validate() const {
  if (!std::isfinite(s)) throw std::invalid_argument("BesovParams: s must be finite");
  require_exponent(p, "BesovParams p");
  require_exponent(q, "BesovParams q");
}

std::pair<int, double> split_smoothness(double s) {
  const double fl = std::floor(s);
  if (fl == s) return {static_cast<int>(s) - 1, 1.0};
  return {static_cast<int>(fl), s - fl};
}

std::vector<LatticeIndex> multi_indices(int dimension, int order) {
  std::vector<LatticeIndex> out;
  if (order < 0) return out;
  if (dimension == 1) return {LatticeIndex{order, 0, 0}};
  for (int a = order; a >= 0; --a) {
    if (dimension == 2) {
      out.push_back({a, order - a, 0});
    } else {
      for (int b = order - a; b >= 0; --b) out.push_back({a, b, order - a - b});
    }
  }
  return out;
}

double liouville_norm(const GridFunction& f, double s, double p) {
  require_exponent(p, "liouville_norm");
  return lp_norm(bessel_order(s, f), p);
}

double besov_norm_lp(const GridFunction& f, const BesovParams& params,
                     const LittlewoodPaleyPartition& partition, nlohmann::json* trace) {
  params.validate();
  if (!(partition.spec() == f.spec()))
    throw std::invalid_argument("besov_norm_lp: partition built for another grid");
  const GridSpec& spec = f.spec();
  const SpectrumFunction F = forward_transform(f);

  auto filtered_norm = [&](std::span<const double> mult) {
    std::vector<Complex> c(F.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = mult[k] * F[k];
    return lp_norm(inverse_transform(SpectrumFunction(spec, std::move(c))), params.p);
  };

  const double low = filtered_norm(partition.base());
  std::vector<double> shells;
  std::vector<double> raw;
  for (int k = 1; k <= partition.k_max(); ++k) {
    const double v = filtered_norm(partition.shell(k));
    raw.push_back(v);
    shells.push_back(std::exp2(params.s * k) * v);
  }
  const double high = combine_q(shells, params.q);
  if (trace) {
    (*trace)["route"] = "littlewood-paley";
    (*trace)["base"] = low;
    (*trace)["shell_norms"] = raw;
    (*trace)["weighted_shells"] = shells;
  }
  return low + high;
}

GridFunction difference(const GridFunction& f, const LatticeIndex& steps, int order) {
  if (order < 1) throw std::invalid_argument("difference: order must be >= 1");
  const GridSpec& spec = f.spec();
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const LatticeIndex base = spec.unravel(i);
    Complex acc = 0.0;
    for (int k = 0; k <= order; ++k) {
      LatticeIndex idx{base[0] + k * steps[0], base[1] + k * steps[1], base[2] + k * steps[2]};
      acc += (k % 2 ? -1.0 : 1.0) * binomial(order, k) * f[spec.ravel_wrapped(idx)];
    }
    out[i] = acc;
  }
  return GridFunction(spec, std::move(out));
}

GridFunction difference(const GridFunction& f, std::span<const double> shift, int order) {
  const GridSpec& spec = f.spec();
  if (static_cast<int>(shift.size()) != spec.dimension())
    throw std::invalid_argument("difference: shift has wrong dimension");
  LatticeIndex steps{0, 0, 0};
  for (int d = 0; d < spec.dimension(); ++d) {
    const double ratio = shift[d] / spec.spacing();
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)))
      throw std::invalid_argument("difference: shift is not a multiple of the grid spacing");
    steps[d] = static_cast<int>(rounded);
  }
  return difference(f, steps, order);
}

std::vector<ShiftSample> lattice_shifts(const GridSpec& spec, double max_length) {
  return shifts_along_directions(spec, max_length, spec.dimension() > 1);
}

namespace {

struct ModulusTable {
  std::vector<double> lengths;  // ascending
  std::vector<double> running_max;
};

ModulusTable modulus_table(const GridFunction& g, int order, double p, double max_length) {
  auto shifts = lattice_shifts(g.spec(), max_length);
  std::sort(shifts.begin(), shifts.end(),
            [](const ShiftSample& a, const ShiftSample& b) { return a.length < b.length; });
  ModulusTable t;
  double best = 0.0;
  for (const auto& s : shifts) {
    best = std::max(best, difference_norm(g, s.steps, order, p));
    t.lengths.push_back(s.length);
    t.running_max.push_back(best);
  }
  return t;
}

// sup over shifts with length strictly below t.
double modulus_at(const ModulusTable& table, double t) {
  auto it = std::lower_bound(table.lengths.begin(), table.lengths.end(), t * (1.0 - 1e-12));
  if (it == table.lengths.begin()) return 0.0;
  return table.running_max[static_cast<std::size_t>(it - table.lengths.begin()) - 1];
}

}  // namespace

ModulusResult modulus_of_continuity(const GridFunction& f, double t, int order, double p) {
  require_exponent(p, "modulus_of_continuity");
  if (order < 1) throw std::invalid_argument("modulus_of_continuity: order must be >= 1");
  ModulusResult out;
  if (!(t > f.spec().spacing())) {
    out.below_spacing = true;
    return out;
  }
  auto table = modulus_table(f, order, p, std::min(t, 0.5 * f.spec().period()));
  out.value = modulus_at(table, t);
  out.shifts_examined = static_cast<int>(table.lengths.size());
  return out;
}

double besov_norm_modulus(const GridFunction& f, const BesovParams& params, int order,
                          int derivative_order, nlohmann::json* trace) {
  params.validate();
  const double s = params.s;
  if (!(s > 0.0)) throw std::invalid_argument("besov_norm_modulus: s must be positive");
  if (derivative_order < 0 || !(derivative_order < s))
    throw std::invalid_argument("besov_norm_modulus: need 0 <= N1 < s");
  if (order < 1 || !(order + derivative_order > s))
    throw std::invalid_argument("besov_norm_modulus: need m + N1 > s");

  const GridSpec& spec = f.spec();
  const int dim = spec.dimension();
  const double t_lo = spec.spacing(), t_hi = 0.5 * spec.period();
  const int count = static_cast<int>(std::ceil(std::log10(t_hi / t_lo) * kNodesPerDecade));
  std::vector<double> ts(count + 1);
  for (int i = 0; i <= count; ++i)
    ts[i] = (i == count) ? t_hi : t_lo * std::pow(10.0, static_cast<double>(i) / kNodesPerDecade);

  double total = lp_norm(f, params.p);
  nlohmann::json axes = nlohmann::json::array();
  for (int j = 0; j < dim; ++j) {
    const LatticeIndex alpha = axis_index(j, derivative_order);
    const GridFunction g = spectral_derivative(f, as_span(alpha, dim));
    const auto table = modulus_table(g, order, params.p, t_hi);

    std::vector<double> vals(ts.size()), omegas(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      omegas[i] = modulus_at(table, ts[i]);
      vals[i] = std::pow(ts[i], derivative_order - s) * omegas[i];
    }
    double term;
    if (std::isinf(params.q)) {
      term = *std::max_element(vals.begin(), vals.end());
    } else {
      double integral = 0.0;
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double dlog = std::log(ts[i + 1] / ts[i]);
        integral += 0.5 * dlog * (std::pow(vals[i], params.q) + std::pow(vals[i + 1], params.q));
      }
      term = std::pow(integral, 1.0 / params.q);
    }
    total += term;
    if (trace) axes.push_back({{"axis", j}, {"t", ts}, {"omega", omegas}, {"term", term}});
  }
  if (trace) {
    (*trace)["route"] = "modulus";
    (*trace)["axes"] = axes;
  }
  return total;
}

double classical_besov_norm(const GridFunction& f, const BesovParams& params,
                            nlohmann::json* trace) {
  params.validate();
  if (!(params.s > 0.0)) throw std::invalid_argument("classical_besov_norm: s must be positive");
  if (std::isinf(params.p) || std::isinf(params.q))
    throw std::invalid_argument("classical_besov_norm: p and q must be finite");
  const auto [k, frac] = split_smoothness(params.s);
  const GridSpec& spec = f.spec();
  const int dim = spec.dimension();

  double total = sobolev_part(f, k, params.p, SobolevCombine::sum);
  const auto shifts = shifts_along_directions(spec, 0.25 * spec.period(), true);
  const double a = frac * params.q;

  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& alpha : multi_indices(dim, k)) {
    const GridFunction g = spectral_derivative(f, as_span(alpha, dim));
    double integral = 0.0;
    // Group shifts by direction; each direction is a radial line.
    std::size_t i = 0;
    while (i < shifts.size()) {
      std::size_t j = i;
      while (j < shifts.size() && shifts[j].direction == shifts[i].direction) ++j;
      std::vector<double> r, G;
      for (std::size_t m = i; m < j; ++m) {
        r.push_back(shifts[m].length);
        G.push_back(std::pow(difference_norm(g, shifts[m].steps, 2, params.p), params.q));
      }
      const auto w = product_weights(r, a);
      double line = 0.0;
      for (std::size_t m = 0; m < r.size(); ++m) line += w[m] * G[m];
      integral += shifts[i].direction_weight * line;
      if (trace && nodes.size() < 4096) nodes.push_back({{"direction", shifts[i].direction}, {"r", r}});
      i = j;
    }
    total += std::pow(integral, 1.0 / params.q);
  }
  if (trace) {
    (*trace)["route"] = "classical";
    (*trace)["integer_part"] = k;
    (*trace)["fraction"] = frac;
    (*trace)["nodes"] = nodes;
  }
  return total;
}

double sobolev_norm(const GridFunction& f, int order, double p, SobolevCombine combine) {
  require_exponent(p, "sobolev_norm");
  if (order < 0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  return sobolev_part(f, order, p, combine);
}

double nikolskii_norm(const GridFunction& f, double s, double p) {
  require_exponent(p, "nikolskii_norm");
  if (!(s > 0.0)) throw std::invalid_argument("nikolskii_norm: s must be positive");
  const auto [k, frac] = split_smoothness(s);
  const GridSpec& spec = f.spec();
  const int dim = spec.dimension();
  double total = sobolev_part(f, k, p, SobolevCombine::sum);
  const auto shifts = lattice_shifts(spec, 0.5 * spec.period());
  for (const auto& alpha : multi_indices(dim, k)) {
    const GridFunction g = spectral_derivative(f, as_span(alpha, dim));
    double sup = 0.0;
    for (const auto& sh : shifts)
      sup = std::max(sup, std::pow(sh.length, -frac) * difference_norm(g, sh.steps, 2, p));
    total += sup;
  }
  return total;
}

double slobodetskii_norm(const GridFunction& f, double s, double p) {
  require_exponent(p, "slobodetskii_norm");
  if (std::isinf(p)) throw std::invalid_argument("slobodetskii_norm: p must be finite");
  const GridSpec& spec = f.spec();
  if (spec.dimension() != 1)
    throw std::invalid_argument("slobodetskii_norm: only implemented for N = 1");
  if (!(s > 0.0) || std::floor(s) == s)
    throw std::invalid_argument("slobodetskii_norm: s must be positive and non-integer");
  const int k = static_cast<int>(std::floor(s));
  const double frac = s - k;
  const double sp = frac * p;

  double total = sobolev_part(f, k, p, SobolevCombine::sum);
  const LatticeIndex alpha{k, 0, 0};
  const GridFunction g = spectral_derivative(f, as_span(alpha, 1));
  const int n = spec.points_per_axis();
  const double h = spec.spacing();
  const double lo = spec.coordinate(0) - 0.5 * h, hi = spec.coordinate(n - 1) + 0.5 * h;

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = spec.coordinate(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::abs(i - j) * h;
      sum += std::pow(std::abs(g[i] - g[j]), p) / std::pow(d, 1.0 + sp);
    }
    // Pairs with one point outside the cell, where the function vanishes,
    // counted for both orderings.
    const double tail = (std::pow(xi - lo, -sp) + std::pow(hi - xi, -sp)) / sp;
    sum += 2.0 * std::pow(std::abs(g[i]), p) * tail / h;
  }
  total += std::pow(sum * h * h, 1.0 / p);
  return total;
}

double evaluate_norm(const GridFunction& f, const NormSpec& norm, nlohmann::json* trace) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          return lp_norm(f, n.p);
        } else if constexpr (std::is_same_v<T, LiouvilleNorm>) {
          return liouville_norm(f, n.s, n.p);
        } else if constexpr (std::is_same_v<T, BesovLpNorm>) {
          return besov_norm_lp(f, {n.s, n.p, n.q}, *partition_for(f.spec()), trace);
        } else if constexpr (std::is_same_v<T, BesovModulusNorm>) {
          return besov_norm_modulus(f, {n.s, n.p, n.q}, n.difference_order,
                                    n.derivative_order, trace);
        } else if constexpr (std::is_same_v<T, ClassicalBesovNorm>) {
          return classical_besov_norm(f, {n.s, n.p, n.q}, trace);
        } else if constexpr (std::is_same_v<T, SobolevNorm>) {
          return sobolev_norm(f, n.order, n.p, n.combine);
        } else if constexpr (std::is_same_v<T, NikolskiiNorm>) {
          return nikolskii_norm(f, n.s, n.p);
        } else {
          return slobodetskii_norm(f, n.s, n.p);
        }
      },
      norm);
}

double localized_norm(const GridFunction& f, const GridFunction& window, const NormSpec& norm,
                      nlohmann::json* trace) {
  if (!(f.spec() == window.spec()))
    throw std::invalid_argument("localized_norm: window on a different grid");
  for (const Complex& w : window.values())
    if (w.imag() != 0.0 || w.real() < 0.0 || w.real() > 1.0)
      throw std::invalid_argument("localized_norm: window values must lie in [0, 1]");
  return evaluate_norm(window * f, norm, trace);
}

GridFunction make_window(const GridSpec& spec, double radius, double transition) {
  if (!(radius >= 0.0) || !(transition > 0.0))
    throw std::invalid_argument("make_window: radius >= 0 and transition > 0 required");
  if (radius + transition >= 0.5 * spec.period())
    throw std::invalid_argument("make_window: window must be supported inside the cell");
  const int dim = spec.dimension();
  return GridFunction::sample(spec, [&](const Point& x) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
    return Complex(1.0 - detail::bump_primitive((std::sqrt(r2) - radius) / transition), 0.0);
  });
}

// ---------------------------------------------------------------------------

std::string describe(const NormSpec& spec) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          return "lp:" + num(n.p);
        } else if constexpr (std::is_same_v<T, LiouvilleNorm>) {
          return "liouville:" + num(n.s) + ":" + num(n.p);
        } else if constexpr (std::is_same_v<T, BesovLpNorm>) {
          return "besov:" + num(n.s) + ":" + num(n.p) + ":" + num(n.q);
        } else if constexpr (std::is_same_v<T, BesovModulusNorm>) {
          return "besov-modulus:" + num(n.s) + ":" + num(n.p) + ":" + num(n.q) + ":m" +
                 std::to_string(n.difference_order) + ":N" +
                 std::to_string(n.derivative_order);
        } else if constexpr (std::is_same_v<T, ClassicalBesovNorm>) {
          return "besov-classical:" + num(n.s) + ":" + num(n.p) + ":" + num(n.q);
        } else if constexpr (std::is_same_v<T, SobolevNorm>) {
          return "sobolev:" + std::to_string(n.order) + ":" + num(n.p) +
                 (n.combine == SobolevCombine::euclidean ? ":l2" : "");
        } else if constexpr (std::is_same_v<T, NikolskiiNorm>) {
          return "nikolskii:" + num(n.s) + ":" + num(n.p);
        } else {
          return "slobodetskii:" + num(n.s) + ":" + num(n.p);
        }
      },
      spec);
}

NormSpec parse_norm_spec(const std::string& text, const std::string& via) {
  std::vector<std::string> parts;
  {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
  }
  auto fail = [&]() -> NormSpec {
    throw std::invalid_argument("cannot parse norm spec '" + text + "'");
  };
  if (parts.empty()) return fail();
  const std::string& kind = parts[0];
  try {
    if (kind == "lp" && parts.size() == 2) return LpNorm{parse_exponent(parts[1])};
    if (kind == "liouville" && parts.size() == 3)
      return LiouvilleNorm{std::stod(parts[1]), parse_exponent(parts[2])};
    if (kind == "besov" && parts.size() == 4) {
      const double s = std::stod(parts[1]), p = parse_exponent(parts[2]),
                   q = parse_exponent(parts[3]);
      if (via == "lp") return BesovLpNorm{s, p, q};
      if (via == "classical") return ClassicalBesovNorm{s, p, q};
      if (via == "modulus") {
        // Smallest admissible difference order with N1 = 0.
        const int m = std::max(1, static_cast<int>(std::floor(s)) + 1);
        return BesovModulusNorm{s, p, q, m, 0};
      }
      return fail();
    }
    if (kind == "sobolev" && (parts.size() == 3 || parts.size() == 4)) {
      SobolevNorm n{std::stoi(parts[1]), parse_exponent(parts[2]), SobolevCombine::sum};
      if (parts.size() == 4) {
        if (parts[3] != "l2") return fail();
        n.combine = SobolevCombine::euclidean;
      }
      return n;
    }
    if (kind == "nikolskii" && parts.size() == 3)
      return NikolskiiNorm{std::stod(parts[1]), parse_exponent(parts[2])};
    if (kind == "slobodetskii" && parts.size() == 3)
      return SlobodetskiiNorm{std::stod(parts[1]), parse_exponent(parts[2])};
  } catch (const std::logic_error&) {
    return fail();
  }
  return fail();
}

}  // namespace smeans
