#pragma once

// Compactly supported distributions: finite sums of derivatives of point
// masses plus an optional density. Means act on them by duality,
// <p(tA) f, phi> = <f, p(tA) phi>.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smeans/grid_fourier.hpp"
#include "smeans/symbols_means.hpp"

namespace smeans {

inline constexpr int kMaxAtomOrder = 4;

/// c * D^alpha delta_x
struct Atom {
  Point location{0.0, 0.0, 0.0};
  LatticeIndex order{0, 0, 0};
  Complex weight{1.0, 0.0};

  int total_order() const { return order[0] + order[1] + order[2]; }
};

class CompactDistribution {
 public:
  CompactDistribution(int dimension, std::vector<Atom> atoms,
                      std::optional<GridFunction> density = std::nullopt);

  static CompactDistribution dirac(int dimension, const Point& at = {0.0, 0.0, 0.0},
                                   Complex weight = 1.0);
  static CompactDistribution from_density(GridFunction density);

  int dimension() const { return dimension_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<GridFunction>& density() const { return density_; }

  /// Throws std::invalid_argument if an atom lies within L/8 of the cell
  /// boundary or the density lives on another grid.
  void validate_on(const GridSpec& spec) const;

 private:
  int dimension_;
  std::vector<Atom> atoms_;
  std::optional<GridFunction> density_;
};

/// sum_j c_j (-1)^|alpha_j| (D^alpha_j phi)(x_j) + pair(density, phi), with
/// off-lattice points evaluated by trigonometric interpolation.
Complex pair_distribution(const CompactDistribution& f, const GridFunction& phi);

/// sum_j c_j (iy)^alpha_j (2pi)^-N exp(-i x_j y) + forward_transform(density).
SpectrumFunction spectrum_of_distribution(const CompactDistribution& f, const GridSpec& spec);

/// Band-limited grid realization of f.
GridFunction realize(const CompactDistribution& f, const GridSpec& spec);

GridFunction mean_of_distribution(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                                  const CompactDistribution& f, const GridSpec& spec);

/// |pair(p(tA) f, phi) - <f, p(tA) phi>|
double verify_duality(const MeanFunction& p, double t, const HomogeneousSymbol& sigma,
                      const CompactDistribution& f, const GridFunction& phi);

/// L_p^{-alpha} norm of the realization (optionally multiplied by a window).
double negative_liouville_norm(const CompactDistribution& f, double alpha, double p,
                               const GridSpec& spec,
                               const std::optional<GridFunction>& window = std::nullopt);

struct MembershipResult {
  bool convergent = false;
  /// ||.||^p at 2n over ||.||^p at n.
  double growth_factor = 0.0;
  /// (S(4n) - S(2n)) / (S(2n) - S(n)); only computed when the growth factor
  /// alone is inconclusive.
  std::optional<double> increment_ratio;
  std::vector<double> powered_norms;
  std::string verdict;
};

inline constexpr double kGrowthDivergent = 1.2;
inline constexpr double kGrowthConvergent = 1.02;
inline constexpr double kIncrementConvergent = 0.995;

/// Refinement test for membership of the atomic part of f in L_p^{-alpha}.
MembershipResult classify_membership(const CompactDistribution& f, double alpha, double p,
                                     const GridSpec& spec);

struct DistributionErrorRecord {
  double t = 0.0;
  /// L_p^{-alpha} norm of p(tA) f - f on the grid.
  double error = 0.0;
  /// |<p(tA) f - f, probe>|
  double pairing_error = 0.0;
  /// max over the window of |p(tA) f - f|, a pointwise (uniform) surrogate.
  double sup_error = 0.0;
};

std::vector<DistributionErrorRecord> distribution_convergence(
    const MeanFunction& p, const std::vector<double>& t_list, const HomogeneousSymbol& sigma,
    const CompactDistribution& f, double alpha, double p_exp, const GridSpec& spec,
    const std::optional<GridFunction>& window, const GridFunction& probe);

nlohmann::json to_json(const CompactDistribution& f);
/// {atoms:[{x:[...], alpha:[...], c:[re,im]}], density_ref: grid function
/// object or path to one}
CompactDistribution distribution_from_json(const nlohmann::json& j, int dimension);

}  // namespace smeans
