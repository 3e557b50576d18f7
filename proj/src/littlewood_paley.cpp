#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "detail/smooth_step.hpp"
#include "smeans/function_spaces.hpp"

namespace smeans {

LittlewoodPaleyPartition::LittlewoodPaleyPartition(GridSpec spec, int k_max,
                                                   std::vector<std::vector<double>> shells,
                                                   std::vector<double> base)
    : spec_(spec), k_max_(k_max), shells_(std::move(shells)), base_(std::move(base)) {
  if (k_max_ < 1 || static_cast<int>(shells_.size()) != k_max_)
    throw std::invalid_argument("LittlewoodPaleyPartition: inconsistent shell count");
  for (const auto& s : shells_)
    if (s.size() != spec_.size())
      throw std::invalid_argument("LittlewoodPaleyPartition: shell size mismatch");
  if (base_.size() != spec_.size())
    throw std::invalid_argument("LittlewoodPaleyPartition: base size mismatch");
}

double LittlewoodPaleyPartition::smooth_step(double r) { return detail::smooth_step(r); }

double LittlewoodPaleyPartition::annulus_profile(double r) {
  if (r <= 0.5 || r >= 2.0) return 0.0;
  return detail::smooth_step(r) - detail::smooth_step(2.0 * r);
}

LittlewoodPaleyPartition build_partition(const GridSpec& spec) {
  const double top = spec.max_wavenumber();
  const int k_max = std::max(1, static_cast<int>(std::ceil(std::log2(top))) + 1);

  // Many lattice points share |xi|; evaluate chi once per distinct radius.
  std::unordered_map<double, double> chi_cache;
  auto chi = [&](double r) {
    auto [it, inserted] = chi_cache.try_emplace(r, 0.0);
    if (inserted) it->second = detail::smooth_step(r);
    return it->second;
  };

  std::vector<std::vector<double>> shells(k_max, std::vector<double>(spec.size(), 0.0));
  std::vector<double> base(spec.size(), 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double r = spec.wavenumber(i);
    base[i] = chi(r);
    for (int k = 1; k <= k_max; ++k) {
      const double scaled = std::ldexp(r, -k);
      if (scaled <= 0.5 || scaled >= 2.0) continue;
      shells[k - 1][i] = chi(scaled) - chi(2.0 * scaled);
    }
  }
  return LittlewoodPaleyPartition(spec, k_max, std::move(shells), std::move(base));
}

std::shared_ptr<const LittlewoodPaleyPartition> partition_for(const GridSpec& spec) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>,
                  std::shared_ptr<const LittlewoodPaleyPartition>>
      cache;
  const auto key = std::make_tuple(spec.dimension(), spec.points_per_axis(), spec.period());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const LittlewoodPaleyPartition>(build_partition(spec));
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(built)).first->second;
}

}  // namespace smeans
