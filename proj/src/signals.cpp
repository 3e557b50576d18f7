#include "smeans/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "detail/smooth_step.hpp"

namespace smeans {

namespace {

double radius_of(const Point& x, int dim) {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2);
}

double check_radius(const GridSpec& spec, double radius) {
  if (!(radius > 0.0) || radius > 0.5 * spec.period() - spec.support_margin())
    throw std::invalid_argument("signal radius must lie in (0, 3L/8]");
  return radius;
}

// 53-bit uniform in [0, 1) from raw engine output; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(item);
  return out;
}

}  // namespace

double signal_window(const GridSpec& spec, const Point& x) {
  const double L = spec.period();
  const double r = radius_of(x, spec.dimension());
  return 1.0 - detail::bump_primitive((r - 0.25 * L) / (0.125 * L));
}

GridFunction bump_signal(const GridSpec& spec, double radius) {
  check_radius(spec, radius);
  const int dim = spec.dimension();
  return GridFunction::sample(spec, [&](const Point& x) {
    const double u = radius_of(x, dim) / radius;
    return Complex(u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0, 0.0);
  });
}

GridFunction truncated_cone_signal(const GridSpec& spec, double radius) {
  check_radius(spec, radius);
  const int dim = spec.dimension();
  return GridFunction::sample(spec, [&](const Point& x) {
    return Complex(std::max(0.0, 1.0 - radius_of(x, dim) / radius), 0.0);
  });
}

GridFunction random_bandlimited_signal(const GridSpec& spec, std::uint64_t seed, int band) {
  if (band < 1) throw std::invalid_argument("random_bandlimited: band must be >= 1");
  const int dim = spec.dimension();
  const double k0 = 2.0 * std::numbers::pi / spec.period();
  std::mt19937_64 rng(seed);

  struct Mode {
    Point y{0.0, 0.0, 0.0};
    double amplitude = 0.0;
    double phase = 0.0;
  };
  std::vector<Mode> modes(8);
  for (auto& m : modes) {
    for (int d = 0; d < dim; ++d) {
      const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * band + 1)) - band;
      m.y[d] = k0 * k;
    }
    m.amplitude = 2.0 * unit_uniform(rng) - 1.0;
    m.phase = 2.0 * std::numbers::pi * unit_uniform(rng);
  }
  return GridFunction::sample(spec, [&](const Point& x) {
    double v = 0.0;
    for (const auto& m : modes) {
      double arg = m.phase;
      for (int d = 0; d < dim; ++d) arg += m.y[d] * x[d];
      v += m.amplitude * std::cos(arg);
    }
    return Complex(signal_window(spec, x) * v, 0.0);
  });
}

GridFunction fractional_signal(const GridSpec& spec, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("fractional: gamma must be positive");
  std::vector<Complex> coeff(spec.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    const double r = spec.wavenumber(k);
    coeff[k] = std::pow(1.0 + r * r, -0.5 * gamma);
  }
  const GridFunction raw = inverse_transform(SpectrumFunction(spec, std::move(coeff))).real_part();
  const GridFunction window =
      GridFunction::sample(spec, [&](const Point& x) { return Complex(signal_window(spec, x)); });
  return window * raw;
}

GridFunction make_signal(const std::string& id, const GridSpec& spec) {
  const auto parts = split(id);
  if (parts.empty()) throw std::invalid_argument("empty signal id");
  const std::string& kind = parts[0];
  try {
    if (kind == "bump" && parts.size() <= 2)
      return bump_signal(spec, parts.size() == 2 ? std::stod(parts[1]) : 0.25 * spec.period());
    if (kind == "truncated_cone" && parts.size() <= 2)
      return truncated_cone_signal(
          spec, parts.size() == 2 ? std::stod(parts[1]) : 0.25 * spec.period());
    if (kind == "random_bandlimited" && parts.size() == 3)
      return random_bandlimited_signal(spec, std::stoull(parts[1]), std::stoi(parts[2]));
    if (kind == "fractional" && parts.size() == 2)
      return fractional_signal(spec, std::stod(parts[1]));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("unknown signal id '" + id + "'");
}

}  // namespace smeans
