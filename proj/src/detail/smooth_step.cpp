#include "detail/smooth_step.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

namespace smeans::detail {

namespace {

double integrate_bump(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(unit_bump, a, b, 12, 1e-14);
}

double bump_mass() {
  static const double mass = integrate_bump(0.0, 1.0);
  return mass;
}

// Truncated Taylor series arithmetic, coefficients c[k] of (u - u0)^k.
using Series = std::vector<double>;

Series reciprocal(const Series& w) {
  Series r(w.size(), 0.0);
  r[0] = 1.0 / w[0];
  for (std::size_t k = 1; k < w.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += w[j] * r[k - j];
    r[k] = -acc / w[0];
  }
  return r;
}

Series exponential(const Series& g) {
  Series e(g.size(), 0.0);
  e[0] = std::exp(g[0]);
  for (std::size_t k = 1; k < g.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * g[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

}  // namespace

double unit_bump(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp(-1.0 / (4.0 * u * (1.0 - u)));
}

double bump_primitive(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  // Integrate from the nearer end; the bump is symmetric about 1/2.
  if (u <= 0.5) return integrate_bump(0.0, u) / bump_mass();
  return 1.0 - integrate_bump(u, 1.0) / bump_mass();
}

double bump_primitive_derivative(double u, int order) {
  if (order < 1) return bump_primitive(u);
  if (u <= 0.0 || u >= 1.0) return 0.0;

  // b(u0 + e) = exp(-1 / w(e)),  w = 4u(1-u) = w0 + w1 e - 4 e^2.
  const std::size_t terms = static_cast<std::size_t>(order);
  Series w(terms, 0.0);
  w[0] = 4.0 * u * (1.0 - u);
  if (terms > 1) w[1] = 4.0 * (1.0 - 2.0 * u);
  if (terms > 2) w[2] = -4.0;
  Series g = reciprocal(w);
  for (double& c : g) c = -c;
  Series b = exponential(g);

  // B^(k) = b^(k-1) / mass, and b^(j) = j! * b[j].
  double factorial = 1.0;
  for (int j = 2; j < order; ++j) factorial *= j;
  return factorial * b[order - 1] / bump_mass();
}

}  // namespace smeans::detail
