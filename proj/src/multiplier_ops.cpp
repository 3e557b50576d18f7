#include "smeans/multiplier_ops.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smeans/function_spaces.hpp"

namespace smeans {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

MultiplierPlan::MultiplierPlan(GridSpec spec, std::vector<Complex> values,
                               std::string provenance)
    : spec_(spec), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.size() != spec_.size())
    throw std::invalid_argument("MultiplierPlan: value count does not match grid");
  for (const Complex& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("MultiplierPlan " + provenance_ + ": non-finite value");
}

MultiplierPlan MultiplierPlan::from_symbol(const GridSpec& spec,
                                           const std::function<Complex(const Point&)>& symbol,
                                           std::string provenance) {
  std::vector<Complex> v(spec.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = symbol(spec.wavevector(k));
  return MultiplierPlan(spec, std::move(v), std::move(provenance));
}

MultiplierPlan MultiplierPlan::identity(const GridSpec& spec) {
  return MultiplierPlan(spec, std::vector<Complex>(spec.size(), 1.0), "identity");
}

MultiplierPlan MultiplierPlan::spectral_mean(const GridSpec& spec, const MeanFunction& p,
                                             double t, const HomogeneousSymbol& sigma) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("spectral_mean: t must be positive");
  const int dim = spec.dimension();
  std::vector<Complex> v(spec.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double s = sigma(spec.wavevector(k), dim);
    v[k] = (s == 0.0) ? 1.0 : p(t * s);
  }
  return MultiplierPlan(spec, std::move(v),
                        "p=" + p.label() + " t=" + fmt(t) + " sigma=" + sigma.label());
}

MultiplierPlan MultiplierPlan::bessel(const GridSpec& spec, double s) {
  return from_symbol(
      spec,
      [s](const Point& y) {
        const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        return Complex(std::pow(1.0 + r2, 0.5 * s), 0.0);
      },
      "bessel order " + fmt(s));
}

MultiplierPlan MultiplierPlan::derivative(const GridSpec& spec, std::span<const int> alpha) {
  if (static_cast<int>(alpha.size()) != spec.dimension())
    throw std::invalid_argument("derivative: multi-index has wrong dimension");
  std::string tag = "D^(";
  for (std::size_t d = 0; d < alpha.size(); ++d) {
    if (alpha[d] < 0) throw std::invalid_argument("derivative: negative order");
    tag += (d ? "," : "") + std::to_string(alpha[d]);
  }
  tag += ")";
  std::vector<int> a(alpha.begin(), alpha.end());
  return from_symbol(
      spec,
      [a](const Point& y) {
        Complex v = 1.0;
        for (std::size_t d = 0; d < a.size(); ++d)
          for (int k = 0; k < a[d]; ++k) v *= Complex(0.0, y[d]);
        return v;
      },
      tag);
}

MultiplierPlan MultiplierPlan::then(const MultiplierPlan& next) const {
  if (!(spec_ == next.spec_)) throw std::invalid_argument("MultiplierPlan::then: grid specs differ");
  std::vector<Complex> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] * next.values_[k];
  return MultiplierPlan(spec_, std::move(v), next.provenance_ + " * " + provenance_);
}

SpectrumFunction apply_multiplier(const MultiplierPlan& plan, const SpectrumFunction& f) {
  if (!(plan.spec() == f.spec()))
    throw std::invalid_argument("apply_multiplier: grid specs differ");
  std::vector<Complex> c(f.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = plan[k] * f[k];
  return SpectrumFunction(f.spec(), std::move(c));
}

GridFunction apply_multiplier(const MultiplierPlan& plan, const GridFunction& f) {
  return inverse_transform(apply_multiplier(plan, forward_transform(f)));
}

GridFunction spectral_mean(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                           const GridFunction& f) {
  return apply_multiplier(MultiplierPlan::spectral_mean(f.spec(), p, t, sigma), f);
}

GridFunction bessel_order(double s, const GridFunction& f) {
  if (s == 0.0) return f;
  return apply_multiplier(MultiplierPlan::bessel(f.spec(), s), f);
}

GridFunction spectral_derivative(const GridFunction& f, std::span<const int> alpha) {
  bool zero = true;
  for (int a : alpha) zero = zero && a == 0;
  if (zero && static_cast<int>(alpha.size()) == f.spec().dimension()) return f;
  return apply_multiplier(MultiplierPlan::derivative(f.spec(), alpha), f);
}

GridFunction standard_bump(const GridSpec& spec) {
  const int dim = spec.dimension();
  std::vector<Complex> v(spec.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = spec.point(i);
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
    const double b = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    v[i] = b;
    mass += b;
  }
  mass *= spec.cell_volume();
  if (mass <= 0.0)
    throw std::invalid_argument("standard_bump: grid too coarse to resolve the unit ball");
  for (auto& z : v) z /= mass;
  return GridFunction(spec, std::move(v));
}

MultiplierPlan mollifier_plan(const GridFunction& bump, double h) {
  const GridSpec& spec = bump.spec();
  const int dim = spec.dimension();
  if (!(h > 0.0)) throw std::invalid_argument("mollify: h must be positive");
  if (h > spec.support_margin())
    throw std::invalid_argument("mollify: h exceeds the support margin L/8");

  struct Sample {
    Point x;
    double w;
  };
  std::vector<Sample> support;
  double mass = 0.0;
  for (std::size_t i = 0; i < bump.size(); ++i) {
    const Complex b = bump[i];
    if (b.imag() != 0.0 || b.real() < 0.0)
      throw std::invalid_argument("mollify: bump must be real and nonnegative");
    if (b.real() == 0.0) continue;
    Point x = spec.point(i);
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
    if (r2 > 1.0 + 1e-12)
      throw std::invalid_argument("mollify: bump support exceeds the unit ball");
    support.push_back({x, b.real()});
    mass += b.real();
  }
  if (mass <= 0.0) throw std::invalid_argument("mollify: bump has zero mass");

  // Transform of the rescaled bump h^-N phi(x/h) at y equals the bump's
  // transform at h y; normalize by the discrete mass.
  std::vector<Complex> v(spec.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    Point y = spec.wavevector(k);
    Complex acc = 0.0;
    for (const auto& s : support) {
      double phase = 0.0;
      for (int d = 0; d < dim; ++d) phase += s.x[d] * y[d];
      acc += s.w * std::polar(1.0, -h * phase);
    }
    v[k] = acc / mass;
  }
  return MultiplierPlan(spec, std::move(v), "mollifier h=" + fmt(h));
}

GridFunction mollify(const GridFunction& u, double h, const GridFunction& bump) {
  if (!(u.spec() == bump.spec())) throw std::invalid_argument("mollify: grid specs differ");
  return apply_multiplier(mollifier_plan(bump, h), u);
}

double converge_error(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                      const GridFunction& u, const NormSpec& norm,
                      const GridFunction& window) {
  return localized_norm(spectral_mean(p, t, sigma, u) - u, window, norm);
}

nlohmann::json to_json(const MultiplierPlan& plan) {
  nlohmann::json values = nlohmann::json::array();
  for (const Complex& z : plan.values()) values.push_back({z.real(), z.imag()});
  return {{"provenance", plan.provenance()}, {"spec", plan.spec()}, {"multiplier", values}};
}

}  // namespace smeans
