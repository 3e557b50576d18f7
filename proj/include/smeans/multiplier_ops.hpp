#pragma once

// Constant-coefficient pseudodifferential operators as Fourier multipliers on
// the periodic lattice. The spectral mean p(tA) of the operator with symbol
// sigma acts diagonally with multiplier p(t sigma(y)).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "smeans/grid_fourier.hpp"
#include "smeans/norm_spec.hpp"
#include "smeans/symbols_means.hpp"

namespace smeans {

class MultiplierPlan {
 public:
  MultiplierPlan(GridSpec spec, std::vector<Complex> values, std::string provenance);

  static MultiplierPlan from_symbol(const GridSpec& spec,
                                    const std::function<Complex(const Point&)>& symbol,
                                    std::string provenance);
  static MultiplierPlan identity(const GridSpec& spec);
  /// p(t sigma(y)); the zero mode is p(0) = 1.
  static MultiplierPlan spectral_mean(const GridSpec& spec, const MeanFunction& p,
                                      double t, const HomogeneousSymbol& sigma);
  /// (1 + |y|^2)^(s/2)
  static MultiplierPlan bessel(const GridSpec& spec, double s);
  /// (i y)^alpha
  static MultiplierPlan derivative(const GridSpec& spec, std::span<const int> alpha);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  const std::string& provenance() const { return provenance_; }

  /// Pointwise product of two multipliers (operator composition).
  MultiplierPlan then(const MultiplierPlan& next) const;

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
  std::string provenance_;
};

SpectrumFunction apply_multiplier(const MultiplierPlan& plan, const SpectrumFunction& f);
GridFunction apply_multiplier(const MultiplierPlan& plan, const GridFunction& f);

GridFunction spectral_mean(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                           const GridFunction& f);

GridFunction bessel_order(double s, const GridFunction& f);

GridFunction spectral_derivative(const GridFunction& f, std::span<const int> alpha);

/// exp(-1/(1-|x|^2)) on the unit ball, scaled to unit discrete mass.
GridFunction standard_bump(const GridSpec& spec);

/// Multiplier of u -> u_h = int u(x - h y) phi(y) dy, i.e. the transform of
/// the bump at h y normalized to 1 at y = 0.
MultiplierPlan mollifier_plan(const GridFunction& bump, double h);

/// u_h. Requires bump >= 0 supported in |x| <= 1 and h below the support
/// margin L/8.
GridFunction mollify(const GridFunction& u, double h, const GridFunction& bump);

/// Localized norm of p(tA)u - u.
double converge_error(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                      const GridFunction& u, const NormSpec& norm,
                      const GridFunction& window);

nlohmann::json to_json(const MultiplierPlan& plan);

}  // namespace smeans
