#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "smeans/function_spaces.hpp"
#include "smeans/multiplier_ops.hpp"
#include "test_support.hpp"

using namespace smeans;
using smeans::testing::naive_transform;
using smeans::testing::random_trig;

namespace {
constexpr double kPi = std::numbers::pi;

GridFunction lattice_exponential(const GridSpec& spec, const LatticeIndex& k) {
  const double k0 = 2 * kPi / spec.period();
  return GridFunction::sample(spec, [&](const Point& x) {
    return std::polar(1.0, k0 * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
  });
}
}  // namespace

TEST(SpectralMean, ActsDiagonallyOnExponentials) {
  const GridSpec spec(2, 32, 2 * kPi);
  const auto p = make_riesz_mean(1.5);
  const auto sigma = parse_symbol("quartic");
  const double t = 1e-4;
  const LatticeIndex k{5, -3, 0};
  const GridFunction e = lattice_exponential(spec, k);
  const GridFunction out = spectral_mean(p, t, sigma, e);
  const double factor = p(t * (std::pow(5.0, 4) + std::pow(3.0, 4)));
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(std::abs(out[i] - factor * e[i]), 0.0, 1e-12);
}

TEST(SpectralMean, UnitMeanAndZeroModeAreIdentity) {
  const GridSpec spec(1, 64, 10.0);
  const GridFunction f = random_trig(spec, 4, 20, false);
  const GridFunction g = spectral_mean(make_unit_mean(), 0.7, parse_symbol("abs:2"), f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(g[i] - f[i]), 0.0, 1e-12);

  const GridFunction c = GridFunction::constant(spec, 3.0);
  const GridFunction h = spectral_mean(make_gaussian_mean(), 5.0, parse_symbol("abs:2"), c);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(h[i] - 3.0), 0.0, 1e-12);
}

TEST(SpectralMean, RejectsNonPositiveT) {
  const GridSpec spec(1, 16, 1.0);
  EXPECT_THROW(MultiplierPlan::spectral_mean(spec, make_gaussian_mean(), 0.0, parse_symbol("abs:2")),
               std::invalid_argument);
  EXPECT_THROW(MultiplierPlan::spectral_mean(spec, make_gaussian_mean(), -1.0, parse_symbol("abs:2")),
               std::invalid_argument);
}

TEST(SpectralMean, HeatSemigroupOracle) {
  // e^{-t|y|^2} on a lattice exponential of wavenumber k0 * 3
  const GridSpec spec(1, 64, 2 * kPi);
  const GridFunction f = GridFunction::sample(spec, [](const Point& x) { return std::cos(3 * x[0]); });
  const GridFunction g = spectral_mean(make_gaussian_mean(), 0.1, parse_symbol("abs:2"), f);
  for (std::size_t i = 0; i < f.size(); ++i)
    EXPECT_NEAR(g[i].real(), std::exp(-0.9) * std::cos(3 * spec.point(i)[0]), 1e-13);
}

TEST(Multiplier, BesselOrdersCompose) {
  const GridSpec spec(2, 16, 3.0);
  const GridFunction f = random_trig(spec, 7, 5, false);
  const GridFunction g = bessel_order(-1.3, bessel_order(1.3, f));
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(g[i] - f[i]), 0.0, 1e-11);

  const auto a = MultiplierPlan::bessel(spec, 0.4);
  const auto b = MultiplierPlan::bessel(spec, 0.6);
  const auto c = a.then(b);
  const auto d = MultiplierPlan::bessel(spec, 1.0);
  for (std::size_t k = 0; k < spec.size(); ++k) EXPECT_NEAR(std::abs(c[k] - d[k]), 0.0, 1e-12 * std::abs(d[k]));
  EXPECT_THROW(a.then(MultiplierPlan::identity(GridSpec(2, 8, 3.0))), std::invalid_argument);
}

TEST(Multiplier, SpectralDerivative) {
  const GridSpec spec(2, 32, 2 * kPi);
  const GridFunction f =
      GridFunction::sample(spec, [](const Point& x) { return std::sin(2 * x[0]) * std::cos(x[1]); });
  const int alpha[2] = {1, 1};
  const GridFunction g = spectral_derivative(f, alpha);
  for (std::size_t i = 0; i < f.size(); i += 7) {
    const Point x = spec.point(i);
    EXPECT_NEAR(g[i].real(), -2 * std::cos(2 * x[0]) * std::sin(x[1]), 1e-11);
  }
  const int bad[1] = {1};
  EXPECT_THROW(spectral_derivative(f, bad), std::invalid_argument);
}

TEST(Multiplier, RejectsMismatchedGrids) {
  const GridSpec a(1, 16, 1.0), b(1, 32, 1.0);
  EXPECT_THROW(apply_multiplier(MultiplierPlan::identity(a), GridFunction::zeros(b)), std::invalid_argument);
  EXPECT_THROW(MultiplierPlan(a, std::vector<Complex>(3), "x"), std::invalid_argument);
  std::vector<Complex> v(a.size(), 1.0);
  v[2] = NAN;
  EXPECT_THROW(MultiplierPlan(a, v, "x"), std::invalid_argument);
}

TEST(Multiplier, JsonCarriesProvenance) {
  const GridSpec spec(1, 8, 1.0);
  const auto plan = MultiplierPlan::spectral_mean(spec, make_gaussian_mean(), 0.5, parse_symbol("abs:2"));
  const auto j = to_json(plan);
  EXPECT_NE(j["provenance"].get<std::string>().find("gaussian"), std::string::npos);
  EXPECT_EQ(j["multiplier"].size(), spec.size());
}

TEST(Mollify, MultiplierIsBumpTransformAtScaledFrequency) {
  const GridSpec spec(1, 128, 8.0);
  const GridFunction bump = standard_bump(spec);
  const double h = 0.5;
  const auto plan = mollifier_plan(bump, h);
  EXPECT_NEAR(std::abs(plan[0] - 1.0), 0.0, 1e-15);
  // Direct oracle: sum phi(x) e^{-i h x y} dx / sum phi dx
  double mass = 0.0;
  for (std::size_t i = 0; i < bump.size(); ++i) mass += bump[i].real();
  for (std::size_t k = 1; k < spec.size(); k += 9) {
    const double y = spec.wavevector(k)[0];
    Complex acc = 0.0;
    for (std::size_t i = 0; i < bump.size(); ++i) acc += bump[i] * std::polar(1.0, -h * spec.point(i)[0] * y);
    EXPECT_NEAR(std::abs(plan[k] - acc / mass), 0.0, 1e-12);
  }
}

TEST(Mollify, ConvergesToSmoothFunction) {
  const GridSpec spec(1, 256, 16.0);
  const GridFunction bump = standard_bump(spec);
  const GridFunction u = GridFunction::sample(spec, [](const Point& x) { return std::exp(-x[0] * x[0]); });
  double prev = INFINITY;
  for (double h : {1.0, 0.5, 0.25, 0.125}) {
    const double err = lp_norm(mollify(u, h, bump) - u, 2.0);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Mollify, Preconditions) {
  const GridSpec spec(1, 64, 8.0);
  const GridFunction bump = standard_bump(spec);
  EXPECT_THROW(mollifier_plan(bump, 0.0), std::invalid_argument);
  EXPECT_THROW(mollifier_plan(bump, 1.01), std::invalid_argument);  // L/8 = 1
  const GridFunction wide = GridFunction::constant(spec, 1.0);
  EXPECT_THROW(mollifier_plan(wide, 0.5), std::invalid_argument);
  const GridFunction negative = -1.0 * bump;
  EXPECT_THROW(mollifier_plan(negative, 0.5), std::invalid_argument);
}

TEST(ConvergeError, MatchesPerModeSum) {
  const GridSpec spec(1, 64, 16.0);
  const GridFunction u = GridFunction::sample(spec, [](const Point& x) { return std::exp(-x[0] * x[0]); });
  const GridFunction window = GridFunction::constant(spec, 1.0);
  const double t = 0.05, alpha = 0.5;
  const double err = converge_error(make_gaussian_mean(), t, parse_symbol("abs:2"), u,
                                    LiouvilleNorm{alpha, 2.0}, window);
  const auto U = naive_transform(u);
  double sum = 0.0;
  for (std::size_t k = 0; k < U.size(); ++k) {
    const double y2 = std::pow(spec.wavenumber(k), 2);
    sum += std::pow(1 - std::exp(-t * y2), 2) * std::pow(1 + y2, alpha) * std::norm(U[k]);
  }
  const double oracle = std::sqrt(2 * kPi * sum * spec.frequency_cell_volume());
  EXPECT_NEAR(err / oracle, 1.0, 1e-10);
}
