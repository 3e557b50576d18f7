#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "smeans/grid_fourier.hpp"

namespace smeans::testing {

/// Direct O(n^2) evaluation of (2pi)^-N sum_x f(x) exp(-i x.y) dx at every
/// lattice frequency; independent of the FFT path.
inline std::vector<Complex> naive_transform(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  const double scale = std::pow(2.0 * std::numbers::pi, -spec.dimension()) * spec.cell_volume();
  std::vector<Complex> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point y = spec.wavevector(k);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Point x = spec.point(i);
      acc += f[i] * std::polar(1.0, -(x[0] * y[0] + x[1] * y[1] + x[2] * y[2]));
    }
    out[k] = acc * scale;
  }
  return out;
}

/// Sum of a few lattice exponentials with random coefficients; the Nyquist
/// column is avoided so the function is exactly band-limited.
inline GridFunction random_trig(const GridSpec& spec, unsigned seed, int max_mode, bool real = true) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-max_mode, max_mode);
  const double k0 = 2.0 * std::numbers::pi / spec.period();
  struct Term {
    int kx, ky, kz;
    Complex c;
  };
  std::vector<Term> terms;
  for (int j = 0; j < 6; ++j)
    terms.push_back({k(rng), spec.dimension() > 1 ? k(rng) : 0, spec.dimension() > 2 ? k(rng) : 0,
                     Complex(u(rng), real ? 0.0 : u(rng))});
  return GridFunction::sample(spec, [&](const Point& x) {
    Complex v = 0.0;
    for (const auto& t : terms) {
      const double arg = k0 * (t.kx * x[0] + t.ky * x[1] + t.kz * x[2]);
      if (real)
        v += t.c.real() * std::cos(arg + t.kx);
      else
        v += t.c * std::polar(1.0, arg);
    }
    return v;
  });
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// 1 - B(r - 1) with B the normalized primitive of exp(-1/(4u(1-u))),
/// by composite Simpson on a fine mesh; independent of the library quadrature.
inline double chi_oracle(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  auto bump = [](double u) { return u <= 0.0 || u >= 1.0 ? 0.0 : std::exp(-1.0 / (4.0 * u * (1.0 - u))); };
  auto simpson = [&](double a, double b) {
    const int n = 4000;
    const double h = (b - a) / n;
    double s = bump(a) + bump(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * bump(a + i * h);
    return s * h / 3.0;
  };
  static const double mass = simpson(0.0, 1.0);
  return 1.0 - simpson(0.0, r - 1.0) / mass;
}

/// Per-mode errors of p(tA)u - u for p(s) = e^{-s}, sigma = |y|^2, from the
/// direct transform: Liouville (alpha, 2) and Besov (alpha, 2, 2) by shells.
struct HeatErrorOracle {
  std::vector<Complex> U;
  GridSpec spec;

  explicit HeatErrorOracle(const GridFunction& u) : U(naive_transform(u)), spec(u.spec()) {}

  double energy(double t, auto weight) const {
    const double cell = spec.frequency_cell_volume() * std::pow(2.0 * std::numbers::pi, spec.dimension());
    double s = 0.0;
    for (std::size_t k = 0; k < U.size(); ++k) {
      const double r = spec.wavenumber(k);
      s += std::pow(1.0 - std::exp(-t * r * r), 2) * weight(r) * std::norm(U[k]);
    }
    return s * cell;
  }

  double liouville(double t, double alpha) const {
    return std::sqrt(energy(t, [&](double r) { return std::pow(1.0 + r * r, alpha); }));
  }

  double besov(double t, double alpha) const {
    if (base_weight.empty()) {
      const int k_max = std::max(1, static_cast<int>(std::ceil(std::log2(spec.max_wavenumber()))) + 1);
      shell_weight.assign(k_max, std::vector<double>(U.size(), 0.0));
      for (std::size_t m = 0; m < U.size(); ++m) {
        const double r = spec.wavenumber(m);
        base_weight.push_back(std::pow(chi_oracle(r), 2));
        for (int k = 1; k <= k_max; ++k) {
          const double x = std::ldexp(r, -k);
          const double phi = chi_oracle(x) - chi_oracle(2.0 * x);
          shell_weight[k - 1][m] = phi * phi;
        }
      }
    }
    auto table = [](const std::vector<double>& w) {
      return [&w, i = std::size_t{0}](double) mutable { return w[i++]; };
    };
    double high = 0.0;
    for (std::size_t k = 0; k < shell_weight.size(); ++k)
      high += std::exp2(2.0 * alpha * static_cast<double>(k + 1)) * energy(t, table(shell_weight[k]));
    return std::sqrt(energy(t, table(base_weight))) + std::sqrt(high);
  }

  mutable std::vector<double> base_weight;
  mutable std::vector<std::vector<double>> shell_weight;
};

}  // namespace smeans::testing
