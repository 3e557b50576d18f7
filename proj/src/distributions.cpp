#include "smeans/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "smeans/function_spaces.hpp"
#include "smeans/multiplier_ops.hpp"

namespace smeans {

CompactDistribution::CompactDistribution(int dimension, std::vector<Atom> atoms,
                                         std::optional<GridFunction> density)
    : dimension_(dimension), atoms_(std::move(atoms)), density_(std::move(density)) {
  if (dimension_ < 1 || dimension_ > 3)
    throw std::invalid_argument("CompactDistribution: dimension must be 1, 2 or 3");
  for (const Atom& a : atoms_) {
    for (int d = 0; d < 3; ++d) {
      if (a.order[d] < 0) throw std::invalid_argument("CompactDistribution: negative order");
      if (d >= dimension_ && (a.order[d] != 0 || a.location[d] != 0.0))
        throw std::invalid_argument("CompactDistribution: atom has extra coordinates");
      if (!std::isfinite(a.location[d]))
        throw std::invalid_argument("CompactDistribution: non-finite location");
    }
    if (a.total_order() > kMaxAtomOrder)
      throw std::invalid_argument("CompactDistribution: derivative order above 4");
    if (!std::isfinite(a.weight.real()) || !std::isfinite(a.weight.imag()))
      throw std::invalid_argument("CompactDistribution: non-finite weight");
  }
  if (density_ && density_->spec().dimension() != dimension_)
    throw std::invalid_argument("CompactDistribution: density has wrong dimension");
}

CompactDistribution CompactDistribution::dirac(int dimension, const Point& at, Complex weight) {
  return CompactDistribution(dimension, {Atom{at, {0, 0, 0}, weight}});
}

CompactDistribution CompactDistribution::from_density(GridFunction density) {
  const int dim = density.spec().dimension();
  return CompactDistribution(dim, {}, std::move(density));
}

void CompactDistribution::validate_on(const GridSpec& spec) const {
  if (spec.dimension() != dimension_)
    throw std::invalid_argument("CompactDistribution: grid has wrong dimension");
  const double limit = 0.5 * spec.period() - spec.support_margin();
  for (const Atom& a : atoms_)
    for (int d = 0; d < dimension_; ++d)
      if (std::abs(a.location[d]) > limit)
        throw std::invalid_argument("CompactDistribution: atom outside the cell interior");
  if (density_ && !(density_->spec() == spec))
    throw std::invalid_argument("CompactDistribution: density lives on another grid");
}

Complex pair_distribution(const CompactDistribution& f, const GridFunction& phi) {
  f.validate_on(phi.spec());
  const int dim = f.dimension();
  Complex total = 0.0;
  if (!f.atoms().empty()) {
    const SpectrumFunction spectrum = forward_transform(phi);
    for (const Atom& a : f.atoms()) {
      const Complex value =
          evaluate_spectrum(spectrum, a.location, std::span<const int>(a.order.data(), dim));
      total += a.weight * (a.total_order() % 2 ? -1.0 : 1.0) * value;
    }
  }
  if (f.density()) total += pair(*f.density(), phi);
  return total;
}

SpectrumFunction spectrum_of_distribution(const CompactDistribution& f, const GridSpec& spec) {
  f.validate_on(spec);
  const int dim = spec.dimension();
  const int n = spec.points_per_axis();
  const Complex I(0.0, 1.0);
  const double norm = std::pow(2.0 * std::numbers::pi, -dim);

  std::vector<Complex> coeff(spec.size(), 0.0);
  if (f.density()) {
    const SpectrumFunction dens = forward_transform(*f.density());
    std::copy(dens.coefficients().begin(), dens.coefficients().end(), coeff.begin());
  }

  for (const Atom& a : f.atoms()) {
    // Separable per-axis factors; the Nyquist column is averaged over +-y so
    // that pairing with evaluate_spectrum is exact.
    std::vector<std::vector<Complex>> axis(dim, std::vector<Complex>(n));
    for (int d = 0; d < dim; ++d) {
      for (int i = 0; i < n; ++i) {
        const double y = spec.frequency(i);
        auto term = [&](double yy) {
          return imaginary_power(yy, a.order[d]) * std::exp(-I * (yy * a.location[d]));
        };
        axis[d][i] = (i == n / 2) ? 0.5 * (term(y) + term(-y)) : term(y);
      }
    }
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      const LatticeIndex idx = spec.unravel(k);
      Complex v = a.weight * norm;
      for (int d = 0; d < dim; ++d) v *= axis[d][idx[d]];
      coeff[k] += v;
    }
  }
  return SpectrumFunction(spec, std::move(coeff));
}

GridFunction realize(const CompactDistribution& f, const GridSpec& spec) {
  return inverse_transform(spectrum_of_distribution(f, spec));
}

GridFunction mean_of_distribution(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                                  const CompactDistribution& f, const GridSpec& spec) {
  const auto plan = MultiplierPlan::spectral_mean(spec, p, t, sigma);
  return inverse_transform(apply_multiplier(plan, spectrum_of_distribution(f, spec)));
}

double verify_duality(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                      const CompactDistribution& f, const GridFunction& phi) {
  const GridFunction lhs_mean = mean_of_distribution(p, t, sigma, f, phi.spec());
  const Complex lhs = pair(lhs_mean, phi);
  const Complex rhs = pair_distribution(f, spectral_mean(p, t, sigma, phi));
  return std::abs(lhs - rhs);
}

double negative_liouville_norm(const CompactDistribution& f, double alpha, double p,
                               const GridSpec& spec, const std::optional<GridFunction>& window) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("negative_liouville_norm: alpha must be >= 0");
  const GridFunction g = realize(f, spec);
  const NormSpec norm = LiouvilleNorm{-alpha, p};
  return window ? localized_norm(g, *window, norm) : evaluate_norm(g, norm);
}

MembershipResult classify_membership(const CompactDistribution& f, double alpha, double p,
                                     const GridSpec& spec) {
  if (std::isinf(p)) throw std::invalid_argument("classify_membership: p must be finite");
  // The density part is a grid object on one resolution only; smooth densities
  // belong to every negative-order space, so the test concerns the atoms.
  const CompactDistribution atoms(f.dimension(), f.atoms());
  if (atoms.atoms().empty())
    throw std::invalid_argument("classify_membership: distribution has no atoms");

  MembershipResult out;
  GridSpec grid = spec;
  auto powered = [&](const GridSpec& g) {
    return std::pow(negative_liouville_norm(atoms, alpha, p, g), p);
  };
  out.powered_norms.push_back(powered(grid));
  grid = grid.refined();
  out.powered_norms.push_back(powered(grid));
  out.growth_factor = out.powered_norms[1] / out.powered_norms[0];

  if (out.growth_factor > kGrowthDivergent) {
    out.convergent = false;
    out.verdict = "divergent: growth factor above 1.2";
  } else if (out.growth_factor < kGrowthConvergent) {
    out.convergent = true;
    out.verdict = "convergent: growth factor below 1.02";
  } else {
    grid = grid.refined();
    out.powered_norms.push_back(powered(grid));
    const double d1 = out.powered_norms[1] - out.powered_norms[0];
    const double d2 = out.powered_norms[2] - out.powered_norms[1];
    out.increment_ratio = d2 / d1;
    out.convergent = *out.increment_ratio < kIncrementConvergent;
    out.verdict = out.convergent ? "convergent: increments shrink under refinement"
                                 : "divergent: increments do not shrink under refinement";
  }
  return out;
}

std::vector<DistributionErrorRecord> distribution_convergence(
    const MeanFunction& p, const std::vector<double>& t_list, const HomogeneousSymbol& sigma,
    const CompactDistribution& f, double alpha, double p_exp, const GridSpec& spec,
    const std::optional<GridFunction>& window, const GridFunction& probe) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("distribution_convergence: alpha must be >= 0");
  if (!(probe.spec() == spec))
    throw std::invalid_argument("distribution_convergence: probe on another grid");
  const SpectrumFunction spectrum = spectrum_of_distribution(f, spec);
  const GridFunction base = inverse_transform(spectrum);
  const Complex base_pairing = pair_distribution(f, probe);
  const NormSpec norm = LiouvilleNorm{-alpha, p_exp};

  std::vector<DistributionErrorRecord> out;
  out.reserve(t_list.size());
  for (double t : t_list) {
    const auto plan = MultiplierPlan::spectral_mean(spec, p, t, sigma);
    const GridFunction diff = inverse_transform(apply_multiplier(plan, spectrum)) - base;
    DistributionErrorRecord r;
    r.t = t;
    r.error = window ? localized_norm(diff, *window, norm) : evaluate_norm(diff, norm);
    r.pairing_error = std::abs(pair_distribution(f, apply_multiplier(plan, probe)) - base_pairing);
    r.sup_error = window ? (*window * diff).max_abs() : diff.max_abs();
    out.push_back(r);
  }
  return out;
}

nlohmann::json to_json(const CompactDistribution& f) {
  const int dim = f.dimension();
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : f.atoms()) {
    atoms.push_back({{"x", std::vector<double>(a.location.begin(), a.location.begin() + dim)},
                     {"alpha", std::vector<int>(a.order.begin(), a.order.begin() + dim)},
                     {"c", {a.weight.real(), a.weight.imag()}}});
  }
  nlohmann::json j{{"atoms", atoms}};
  if (f.density()) j["density_ref"] = to_json(*f.density());
  return j;
}

CompactDistribution distribution_from_json(const nlohmann::json& j, int dimension) {
  std::vector<Atom> atoms;
  for (const auto& e : j.value("atoms", nlohmann::json::array())) {
    for (auto it = e.begin(); it != e.end(); ++it)
      if (it.key() != "x" && it.key() != "alpha" && it.key() != "c")
        throw std::invalid_argument("distribution JSON: unknown atom key '" + it.key() + "'");
    Atom a;
    const auto x = e.at("x").get<std::vector<double>>();
    if (static_cast<int>(x.size()) != dimension)
      throw std::invalid_argument("distribution JSON: atom location has wrong dimension");
    std::copy(x.begin(), x.end(), a.location.begin());
    if (e.contains("alpha")) {
      const auto alpha = e.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != dimension)
        throw std::invalid_argument("distribution JSON: multi-index has wrong dimension");
      std::copy(alpha.begin(), alpha.end(), a.order.begin());
    }
    if (e.contains("c")) {
      const auto& c = e.at("c");
      a.weight = c.is_array() ? Complex(c.at(0).get<double>(), c.at(1).get<double>())
                              : Complex(c.get<double>(), 0.0);
    }
    atoms.push_back(a);
  }
  std::optional<GridFunction> density;
  if (j.contains("density_ref") && !j.at("density_ref").is_null()) {
    const auto& ref = j.at("density_ref");
    if (ref.is_string()) {
      std::ifstream in(ref.get<std::string>());
      if (!in) throw std::invalid_argument("distribution JSON: cannot open " + ref.get<std::string>());
      density = grid_function_from_json(nlohmann::json::parse(in));
    } else {
      density = grid_function_from_json(ref);
    }
  }
  return CompactDistribution(dimension, std::move(atoms), std::move(density));
}

}  // namespace smeans
