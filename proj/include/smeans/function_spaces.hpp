#pragma once

// Norms of Liouville, Besov, Sobolev, Slobodetskii and Nikolskii spaces on
// the periodic lattice, plus localized (cut-off) versions used as surrogates
// of restriction norms on a compact set M.

#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "smeans/grid_fourier.hpp"
#include "smeans/norm_spec.hpp"

namespace smeans {

/// Dyadic partition of unity on the frequency lattice:
///   base(xi) + sum_{k=1}^{k_max} phi(2^-k xi) = 1,
/// phi(xi) = chi(|xi|) - chi(2|xi|), supp phi = {1/2 <= |xi| <= 2}.
class LittlewoodPaleyPartition {
 public:
  LittlewoodPaleyPartition(GridSpec spec, int k_max, std::vector<std::vector<double>> shells,
                           std::vector<double> base);

  const GridSpec& spec() const { return spec_; }
  int k_max() const { return k_max_; }
  /// phi(2^-k xi) over the lattice, k = 1..k_max.
  std::span<const double> shell(int k) const { return shells_.at(k - 1); }
  std::span<const double> base() const { return base_; }

  /// chi: 1 on [0,1], 0 on [2,inf).
  static double smooth_step(double r);
  /// phi as a function of |xi|.
  static double annulus_profile(double r);

 private:
  GridSpec spec_;
  int k_max_;
  std::vector<std::vector<double>> shells_;
  std::vector<double> base_;
};

LittlewoodPaleyPartition build_partition(const GridSpec& spec);
/// Shared, cached partition for a grid.
std::shared_ptr<const LittlewoodPaleyPartition> partition_for(const GridSpec& spec);

struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  void validate() const;
};

double liouville_norm(const GridFunction& f, double s, double p);

double besov_norm_lp(const GridFunction& f, const BesovParams& params,
                     const LittlewoodPaleyPartition& partition,
                     nlohmann::json* trace = nullptr);

/// Delta_y^m f(x) = sum_k C(m,k) (-1)^k f(x + k y), y given in lattice steps.
GridFunction difference(const GridFunction& f, const LatticeIndex& steps, int order);
/// Same with a physical shift; throws if y is not a lattice multiple.
GridFunction difference(const GridFunction& f, std::span<const double> shift, int order);

/// Lattice shifts used for sup / integrals over y: every shift up to L/2 in
/// 1D, a sample along 16+ primitive directions in 2D/3D.
struct ShiftSample {
  LatticeIndex steps{0, 0, 0};
  double length = 0.0;
  double direction_weight = 0.0;  // share of the unit sphere for polar integrals
  int direction = 0;
};
std::vector<ShiftSample> lattice_shifts(const GridSpec& spec, double max_length);

struct ModulusResult {
  double value = 0.0;
  bool below_spacing = false;
  int shifts_examined = 0;
};

/// omega_p^m(t, f) = sup_{|y| < t} ||Delta_y^m f||_p over lattice shifts.
ModulusResult modulus_of_continuity(const GridFunction& f, double t, int order, double p);

double besov_norm_modulus(const GridFunction& f, const BesovParams& params, int order,
                          int derivative_order, nlohmann::json* trace = nullptr);

double classical_besov_norm(const GridFunction& f, const BesovParams& params,
                            nlohmann::json* trace = nullptr);

double sobolev_norm(const GridFunction& f, int order, double p,
                    SobolevCombine combine = SobolevCombine::sum);
double nikolskii_norm(const GridFunction& f, double s, double p);
double slobodetskii_norm(const GridFunction& f, double s, double p);

double evaluate_norm(const GridFunction& f, const NormSpec& norm,
                     nlohmann::json* trace = nullptr);

/// Norm of window * f. Window values must lie in [0, 1].
double localized_norm(const GridFunction& f, const GridFunction& window, const NormSpec& norm,
                      nlohmann::json* trace = nullptr);

/// Radial smooth cutoff: 1 for |x| <= radius, 0 for |x| >= radius + transition.
GridFunction make_window(const GridSpec& spec, double radius, double transition);

/// Splits s into an integer part and a fractional part in (0, 1]
/// (integer s -> (s - 1, 1)).
std::pair<int, double> split_smoothness(double s);

/// All multi-indices of total order `order` in `dimension` variables.
std::vector<LatticeIndex> multi_indices(int dimension, int order);

}  // namespace smeans
