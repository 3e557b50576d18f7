#include "smeans/grid_fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace smeans {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution with fftw_execute_dft is. Plans
// are created once per (dimension, n, sign) and kept for the process lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dimension, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dimension, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t total = 1;
    for (int d = 0; d < dimension; ++d) total *= static_cast<std::size_t>(n);
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::array<int, 3> dims{n, n, n};
    fftw_plan plan = fftw_plan_dft(dimension, dims.data(), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const GridSpec& spec, std::vector<Complex>& data, int sign) {
  fftw_plan plan =
      PlanCache::instance().get(spec.dimension(), spec.points_per_axis(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

// exp(i L/2 y) = (-1)^k for y = 2 pi k / L: the phase from sampling on
// [-L/2, L/2) instead of [0, L).
double half_period_phase(const GridSpec& spec, std::size_t flat) {
  LatticeIndex idx = spec.unravel(flat);
  int parity = 0;
  for (int d = 0; d < spec.dimension(); ++d)
    parity += spec.signed_index(idx[d]);
  return (parity % 2 == 0) ? 1.0 : -1.0;
}

void require_finite(std::span<const Complex> values, const char* what) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

GridSpec::GridSpec(int dimension, int points_per_axis, double period)
    : dimension_(dimension), points_(points_per_axis), period_(period) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("GridSpec: dimension must be 1, 2 or 3");
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument("GridSpec: points per axis must be even and >= 8");
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("GridSpec: period must be positive");
  size_ = 1;
  for (int d = 0; d < dimension; ++d) size_ *= static_cast<std::size_t>(points_);
}

double GridSpec::cell_volume() const {
  return std::pow(spacing(), dimension_);
}

double GridSpec::frequency_cell_volume() const {
  return std::pow(kTwoPi / period_, dimension_);
}

double GridSpec::frequency(int i) const {
  return kTwoPi / period_ * signed_index(i);
}

LatticeIndex GridSpec::unravel(std::size_t flat) const {
  LatticeIndex idx{0, 0, 0};
  for (int d = dimension_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

std::size_t GridSpec::ravel(const LatticeIndex& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dimension_; ++d) flat = flat * points_ + idx[d];
  return flat;
}

std::size_t GridSpec::ravel_wrapped(const LatticeIndex& idx) const {
  LatticeIndex w{0, 0, 0};
  for (int d = 0; d < dimension_; ++d) {
    int r = idx[d] % points_;
    w[d] = r < 0 ? r + points_ : r;
  }
  return ravel(w);
}

Point GridSpec::point(std::size_t flat) const {
  LatticeIndex idx = unravel(flat);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < dimension_; ++d) x[d] = coordinate(idx[d]);
  return x;
}

Point GridSpec::wavevector(std::size_t flat) const {
  LatticeIndex idx = unravel(flat);
  Point y{0.0, 0.0, 0.0};
  for (int d = 0; d < dimension_; ++d) y[d] = frequency(idx[d]);
  return y;
}

double GridSpec::wavenumber(std::size_t flat) const {
  Point y = wavevector(flat);
  return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
}

double GridSpec::max_wavenumber() const {
  double axis = kTwoPi / period_ * (points_ / 2);
  return axis * std::sqrt(static_cast<double>(dimension_));
}

int GridSpec::nyquist_axes(std::size_t flat) const {
  LatticeIndex idx = unravel(flat);
  int count = 0;
  for (int d = 0; d < dimension_; ++d)
    if (idx[d] == points_ / 2) ++count;
  return count;
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(GridSpec spec, std::vector<Complex> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size())
    throw std::invalid_argument("GridFunction: value count does not match grid");
  require_finite(values_, "GridFunction");
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
  return GridFunction(spec, std::vector<Complex>(spec.size()));
}

GridFunction GridFunction::constant(const GridSpec& spec, Complex c) {
  return GridFunction(spec, std::vector<Complex>(spec.size(), c));
}

GridFunction GridFunction::sample(const GridSpec& spec,
                                  const std::function<Complex(const Point&)>& fn) {
  std::vector<Complex> v(spec.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(spec.point(i));
  return GridFunction(spec, std::move(v));
}

GridFunction GridFunction::real_part() const {
  std::vector<Complex> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(),
                 [](const Complex& z) { return Complex(z.real(), 0.0); });
  return GridFunction(spec_, std::move(v));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const Complex& z : values_) m = std::max(m, std::abs(z));
  return m;
}

namespace {
void require_same_spec(const GridSpec& a, const GridSpec& b, const char* op) {
  if (!(a == b))
    throw std::invalid_argument(std::string(op) + ": grid specs differ");
}
}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_spec(a.spec_, b.spec_, "operator+");
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  return GridFunction(a.spec_, std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_spec(a.spec_, b.spec_, "operator-");
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
  return GridFunction(a.spec_, std::move(v));
}

GridFunction operator*(Complex c, const GridFunction& a) {
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a.values_[i];
  return GridFunction(a.spec_, std::move(v));
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  require_same_spec(a.spec_, b.spec_, "operator*");
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  return GridFunction(a.spec_, std::move(v));
}

SpectrumFunction::SpectrumFunction(GridSpec spec, std::vector<Complex> coefficients)
    : spec_(spec), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != spec_.size())
    throw std::invalid_argument("SpectrumFunction: coefficient count does not match grid");
  require_finite(coefficients_, "SpectrumFunction");
}

// ---------------------------------------------------------------------------

SpectrumFunction forward_transform(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  execute(spec, data, FFTW_FORWARD);
  const double scale =
      spec.cell_volume() / std::pow(kTwoPi, spec.dimension());
  for (std::size_t k = 0; k < data.size(); ++k)
    data[k] *= scale * half_period_phase(spec, k);
  return SpectrumFunction(spec, std::move(data));
}

GridFunction inverse_transform(const SpectrumFunction& spectrum) {
  const GridSpec& spec = spectrum.spec();
  std::vector<Complex> data(spectrum.size());
  const double dy = spec.frequency_cell_volume();
  for (std::size_t k = 0; k < data.size(); ++k)
    data[k] = spectrum[k] * (dy * half_period_phase(spec, k));
  execute(spec, data, FFTW_BACKWARD);
  return GridFunction(spec, std::move(data));
}

double lp_norm(const GridFunction& f, double p) {
  if (std::isnan(p) || p < 1.0)
    throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  // Scale by the maximum to keep |f|^p in range for large p.
  const double scale = f.max_abs();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const Complex& z : f.values()) sum += std::pow(std::abs(z) / scale, p);
  return scale * std::pow(sum * f.spec().cell_volume(), 1.0 / p);
}

double spectral_energy(const SpectrumFunction& spectrum) {
  const GridSpec& spec = spectrum.spec();
  double sum = 0.0;
  for (const Complex& c : spectrum.coefficients()) sum += std::norm(c);
  return sum * spec.frequency_cell_volume() * std::pow(kTwoPi, spec.dimension());
}

Complex pair(const GridFunction& f, const GridFunction& g) {
  require_same_spec(f.spec(), g.spec(), "pair");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return sum * f.spec().cell_volume();
}

Complex evaluate_spectrum(const SpectrumFunction& spectrum, const Point& x,
                          std::span<const int> order) {
  const GridSpec& spec = spectrum.spec();
  const int dim = spec.dimension();
  if (!order.empty() && static_cast<int>(order.size()) != dim)
    throw std::invalid_argument("evaluate_spectrum: order has wrong dimension");
  const int n = spec.points_per_axis();
  const Complex I(0.0, 1.0);

  // Per-axis factor tables: (i y)^a exp(i y x), Nyquist split across +-y.
  std::vector<std::vector<Complex>> axis_factor(dim, std::vector<Complex>(n));
  for (int d = 0; d < dim; ++d) {
    const int a = order.empty() ? 0 : order[d];
    for (int i = 0; i < n; ++i) {
      const double y = spec.frequency(i);
      auto term = [&](double yy) {
        return imaginary_power(yy, a) * std::exp(I * (yy * x[d]));
      };
      axis_factor[d][i] = (i == n / 2) ? 0.5 * (term(y) + term(-y)) : term(y);
    }
  }

  Complex sum = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    LatticeIndex idx = spec.unravel(k);
    Complex factor = 1.0;
    for (int d = 0; d < dim; ++d) factor *= axis_factor[d][idx[d]];
    sum += spectrum[k] * factor;
  }
  return sum * spec.frequency_cell_volume();
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const GridSpec& spec) {
  j = nlohmann::json{{"N", spec.dimension()},
                     {"n", spec.points_per_axis()},
                     {"L", spec.period()}};
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  return GridSpec(j.at("N").get<int>(), j.at("n").get<int>(), j.at("L").get<double>());
}

namespace {
nlohmann::json values_to_json(std::span<const Complex> values) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Complex& z : values) arr.push_back({z.real(), z.imag()});
  return arr;
}

std::vector<Complex> values_from_json(const nlohmann::json& arr) {
  std::vector<Complex> v;
  v.reserve(arr.size());
  for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return v;
}
}  // namespace

nlohmann::json to_json(const GridFunction& f) {
  return {{"spec", f.spec()}, {"values", values_to_json(f.values())}};
}

nlohmann::json to_json(const SpectrumFunction& f) {
  return {{"spec", f.spec()}, {"values", values_to_json(f.coefficients())}};
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  return GridFunction(grid_spec_from_json(j.at("spec")), values_from_json(j.at("values")));
}

SpectrumFunction spectrum_function_from_json(const nlohmann::json& j) {
  return SpectrumFunction(grid_spec_from_json(j.at("spec")),
                          values_from_json(j.at("values")));
}

}  // namespace smeans
