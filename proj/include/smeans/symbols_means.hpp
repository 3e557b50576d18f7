#pragma once

// Homogeneous elliptic symbols sigma(y) defining the operator A, the profile
// functions p(lambda) of the spectral means p(tA), and numerical checkers
// for the hypotheses under which p(tA)u -> u.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "smeans/grid_fourier.hpp"

namespace smeans {

class HomogeneousSymbol {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  /// `dimension` = 0 means the symbol accepts any dimension.
  HomogeneousSymbol(double degree, Evaluator evaluate, std::string label,
                    int dimension = 0);

  /// |y|^m, any dimension.
  static HomogeneousSymbol power_of_norm(double m);
  /// y1^4 + y2^4 (N = 2, degree 4): a non-radial elliptic symbol.
  static HomogeneousSymbol quartic_2d();

  double degree() const { return degree_; }
  int dimension() const { return dimension_; }
  const std::string& label() const { return label_; }

  /// sigma(y), with sigma(0) = 0.
  double operator()(std::span<const double> y) const;
  double operator()(const Point& y, int dimension) const;

 private:
  double degree_;
  Evaluator evaluate_;
  std::string label_;
  int dimension_;
};

struct SymbolValidation {
  double max_homogeneity_error = 0.0;  // relative
  double ellipticity_constant = 0.0;   // min sigma(y)/|y|^m on sampled sphere
  bool homogeneous = false;
  bool elliptic = false;
};

/// Samples (y, lambda) pairs and unit vectors to check homogeneity and
/// positivity.
SymbolValidation validate_symbol(const HomogeneousSymbol& sigma, int dimension,
                                 int samples = 1000, std::uint64_t seed = 1);

class MeanFunction {
 public:
  using Profile = std::function<double(double)>;
  /// Closed-form j-th derivative if known at lambda, otherwise nullopt.
  using ClosedFormDerivative = std::function<std::optional<double>(int, double)>;

  /// Throws if p(0) != 1.
  MeanFunction(Profile profile, ClosedFormDerivative derivative, std::string label);

  double operator()(double lambda) const { return profile_(lambda); }
  const std::string& label() const { return label_; }

  std::optional<double> closed_form_derivative(int order, double lambda) const;
  /// Closed form when available, else a 4th-order central stencil with step
  /// 1e-3 (1 + lambda).
  double derivative(int order, double lambda) const;

  /// lambda -> p(t lambda).
  MeanFunction rescaled(double t) const;

 private:
  Profile profile_;
  ClosedFormDerivative closed_form_;
  std::string label_;
};

/// (1 - |z|)^s for |z| <= 1, 0 beyond. s = 0 is the sharp spectral projector.
MeanFunction make_riesz_mean(double s);
/// exp(-lambda)
MeanFunction make_gaussian_mean();
/// C-infinity, 1 on [0, tau/2], 0 on [tau, inf).
MeanFunction make_smooth_cutoff_mean(double tau);
/// p = 1 everywhere (no decay; fails integrability).
MeanFunction make_unit_mean();

/// Parses "gaussian", "riesz:<s>", "cutoff:<tau>", "unit".
MeanFunction parse_mean(const std::string& id);
/// Parses "abs:<m>" (|y|^m) and "quartic".
HomogeneousSymbol parse_symbol(const std::string& id);

struct IntegrabilityResult {
  bool finite = false;
  double value = 0.0;           // quadrature over [0, 1e3]
  double exponent = 0.0;        // (N - alpha0 - 1)/m
  double decay_exponent = 0.0;  // fitted on [1e3, 4e3]; +inf if p vanishes there
  std::string reason;
};

IntegrabilityResult check_integrability(const MeanFunction& p, int dimension,
                                        double alpha0, double degree);

struct DerivativeDecayResult {
  std::vector<double> constants;  // C_j, j = 0..l
  bool pass = false;
  std::string diagnostic;
};

DerivativeDecayResult check_derivative_decay(const MeanFunction& p, int l);

struct Theorem2Check {
  bool unit_at_zero = false;
  bool bounded = false;
  bool continuous = false;
  double sup = 0.0;
  double max_jump = 0.0;
  bool pass = false;
  std::string note;
};

Theorem2Check check_theorem2(const MeanFunction& p, double tau);

/// T3: the distribution theorem, checked with the T1 hypotheses on p.
enum class TheoremId { T1, T2, T3 };

struct HypothesisParameters {
  int N = 1;
  double m = 2.0;
  double p = 2.0;
  double p0 = 2.0;
  double alpha = 0.0;
  std::optional<double> alpha0;   // T1 default N/p0; required for T2
  std::optional<double> epsilon;  // must equal N(1/p - 1/p0) if given
  double beta = 0.0;
  int l = 0;
  double q = 2.0;
  double tau = 1.0;               // continuity window for T2
};

struct ConditionLine {
  std::string condition;
  std::string formula;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  /// Recorded but not part of all_pass().
  bool informational = false;
};

struct HypothesisReport {
  TheoremId theorem = TheoremId::T1;
  HypothesisParameters parameters;
  double alpha0 = 0.0;
  double epsilon = 0.0;
  std::vector<ConditionLine> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  const ConditionLine* find(const std::string& condition) const;
};

HypothesisReport assemble_hypothesis_report(TheoremId theorem,
                                            const HypothesisParameters& parameters,
                                            const MeanFunction& p);

nlohmann::json to_json(const HypothesisReport& report);
std::string to_string(TheoremId theorem);

}  // namespace smeans
