#pragma once

// Periodic sampling lattice used as a model of compactly supported functions
// on R^N, together with the discrete Fourier pair
//
//   F(y) = (2 pi)^-N  sum_x f(x) exp(-i x.y) dx        (forward)
//   f(x) = sum_y F(y) exp(i x.y) dy                    (inverse)
//
// where dx = (L/n)^N and dy = (2 pi / L)^N. Both sums are exact quadratures
// for band-limited data on the lattice.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace smeans {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;
using LatticeIndex = std::array<int, 3>;

class GridSpec {
 public:
  GridSpec(int dimension, int points_per_axis, double period);

  int dimension() const { return dimension_; }
  int points_per_axis() const { return points_; }
  double period() const { return period_; }
  double spacing() const { return period_ / points_; }
  std::size_t size() const { return size_; }

  /// (L/n)^N
  double cell_volume() const;
  /// (2 pi / L)^N
  double frequency_cell_volume() const;
  /// Distance kept between any support and the cell boundary.
  double support_margin() const { return period_ / 8.0; }

  double coordinate(int i) const { return -0.5 * period_ + i * spacing(); }
  /// Signed DFT index: 0..n/2-1, then -n/2..-1.
  int signed_index(int i) const { return i < points_ / 2 ? i : i - points_; }
  double frequency(int i) const;

  LatticeIndex unravel(std::size_t flat) const;
  std::size_t ravel(const LatticeIndex& idx) const;
  /// Periodic wrap of an arbitrary integer index per axis.
  std::size_t ravel_wrapped(const LatticeIndex& idx) const;

  Point point(std::size_t flat) const;
  Point wavevector(std::size_t flat) const;
  double wavenumber(std::size_t flat) const;
  /// Largest |y| over the frequency lattice (the corner of the Nyquist box).
  double max_wavenumber() const;
  /// Number of Nyquist components (index -n/2) in the flat frequency index.
  int nyquist_axes(std::size_t flat) const;

  GridSpec refined() const { return GridSpec(dimension_, 2 * points_, period_); }

  bool operator==(const GridSpec& other) const = default;

 private:
  int dimension_;
  int points_;
  double period_;
  std::size_t size_;
};

class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<Complex> values);

  static GridFunction zeros(const GridSpec& spec);
  static GridFunction constant(const GridSpec& spec, Complex c);
  static GridFunction sample(const GridSpec& spec,
                             const std::function<Complex(const Point&)>& fn);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  GridFunction real_part() const;
  double max_abs() const;

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(Complex c, const GridFunction& a);
  /// Pointwise product.
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b);

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
};

class SpectrumFunction {
 public:
  SpectrumFunction(GridSpec spec, std::vector<Complex> coefficients);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t i) const { return coefficients_[i]; }
  std::size_t size() const { return coefficients_.size(); }

 private:
  GridSpec spec_;
  std::vector<Complex> coefficients_;
};

SpectrumFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const SpectrumFunction& spectrum);

/// Discrete L_p norm (sum |f|^p dx)^(1/p); p = infinity gives max |f|.
double lp_norm(const GridFunction& f, double p);

/// (2 pi)^N sum |F|^2 dy, which equals lp_norm(f, 2)^2 under the convention.
double spectral_energy(const SpectrumFunction& spectrum);

/// Bilinear Riemann sum of f g dx (no conjugation).
Complex pair(const GridFunction& f, const GridFunction& g);

/// (i y)^a for a >= 0, with (i y)^0 = 1 also at y = 0.
inline Complex imaginary_power(double y, int a) {
  Complex v = 1.0;
  for (int k = 0; k < a; ++k) v *= Complex(0.0, y);
  return v;
}

/// Value of the trigonometric interpolant (or its derivative D^order) of the
/// spectrum at an arbitrary point. Nyquist components are split evenly
/// between +n/2 and -n/2 so that real data stays real.
Complex evaluate_spectrum(const SpectrumFunction& spectrum, const Point& x,
                          std::span<const int> order = {});

void to_json(nlohmann::json& j, const GridSpec& spec);
GridSpec grid_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GridFunction& f);
nlohmann::json to_json(const SpectrumFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);
SpectrumFunction spectrum_function_from_json(const nlohmann::json& j);

}  // namespace smeans
