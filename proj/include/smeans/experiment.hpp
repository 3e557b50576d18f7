#pragma once

// Convergence sweeps, norm-equivalence studies and hypothesis reports driven
// by a JSON configuration.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smeans/grid_fourier.hpp"
#include "smeans/norm_spec.hpp"
#include "smeans/symbols_means.hpp"

namespace smeans {

struct Schedule {
  double t0 = 0.1;
  double ratio = 0.25;
  int steps = 6;

  /// t0, t0 r, ..., t0 r^(steps-1)
  std::vector<double> values() const;
  void validate() const;
};

struct WindowConfig {
  double radius = 0.0;
  /// Defaults to min(L/16, (L/2 - radius)/2) when absent.
  std::optional<double> transition;
};

enum class ExperimentKind { converge_function, converge_distribution, equivalence, conditions };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::converge_function;
  GridSpec grid{1, 256, 64.0};
  std::string symbol = "abs:2";
  std::string mean = "gaussian";
  TheoremId theorem = TheoremId::T1;

  /// "liouville" or "besov"; for distributions the order is -alpha.
  std::string space = "liouville";
  /// Besov route: "lp", "modulus" or "classical".
  std::string via = "lp";
  double alpha = 0.5;
  std::optional<double> beta;
  double p = 2.0;
  double q = 2.0;
  double p0 = 2.0;
  std::optional<double> alpha0;
  std::optional<int> l;
  double tau = 1.0;

  Schedule schedule;
  std::string signal = "bump";
  std::optional<WindowConfig> window;

  /// CompactDistribution JSON; defaults to delta at the origin.
  nlohmann::json distribution = nlohmann::json::object();
  std::string probe = "bump";

  int corpus_size = 20;
  double corpus_s = 0.7;
  int corpus_band = 6;

  std::string output;
  std::string format = "csv";

  void validate() const;
  HypothesisParameters hypothesis_parameters() const;
  /// Norm applied to errors: Liouville(alpha, p) or Besov(alpha, p, q) by route.
  NormSpec error_norm() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
std::string to_string(ExperimentKind kind);

struct ConvergenceRecord {
  double t = 0.0;
  double error = 0.0;
  /// Distribution runs only: |<p(tA)f - f, probe>| and the windowed sup error.
  std::optional<double> pairing_error;
  std::optional<double> sup_error;
};

struct ConvergenceReport {
  std::string space;
  std::string norm_route;
  std::vector<ConvergenceRecord> records;
  bool monotone = false;
  double slope = 0.0;
  double floor = 0.0;
  bool floor_validated = false;
  /// Norm of the signal content above half the lattice ceiling.
  double truncation_error = 0.0;
  /// sup_t ||p(tA)u|| / ||u|| over the schedule (function runs).
  std::optional<double> uniform_bound;
  HypothesisReport hypotheses;
  std::vector<std::string> labels;

  /// Hypotheses pass but errors are not decreasing down to the floor.
  bool regression() const { return hypotheses.all_pass() && !monotone; }
};

/// Strictly decreasing until errors reach the floor level (<= 1e-12 of the
/// first error, or <= the validated floor).
bool decreasing_to_floor(const std::vector<double>& errors, double floor, bool floor_validated);

/// Least-squares slope of log error against log t over points with
/// error > 10 floor (all positive points if the floor is not validated).
double fit_slope(const std::vector<double>& t, const std::vector<double>& errors, double floor,
                 bool floor_validated);

/// Norm of the part of f with |y| above half of the lattice ceiling.
double band_truncation_error(const GridFunction& f, const NormSpec& norm);

ConvergenceReport run_convergence_function(const ExperimentConfig& config);
ConvergenceReport run_convergence_distribution(const ExperimentConfig& config);

struct RatioBracket {
  std::string pair;
  double min = 0.0;
  double max = 0.0;
  double bracket = 0.0;          // max / min
  double bracket_refined = 0.0;  // same under n -> 2n
  double stability = 0.0;        // bracket_refined / bracket
};

struct EquivalenceReport {
  std::vector<RatioBracket> brackets;
  /// max |liouville(1, 2) / sobolev(1, 2) - 1| over the corpus.
  double liouville_sobolev_deviation = 0.0;
  int corpus_size = 0;
  nlohmann::json per_function = nlohmann::json::array();

  const RatioBracket* find(const std::string& pair) const;
};

EquivalenceReport run_equivalence(const ExperimentConfig& config);

nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const EquivalenceReport& report);
/// Header t,error,space,norm_route,monotone,slope,floor; numbers in %.17g.
std::string to_csv(const ConvergenceReport& report);
std::string to_csv(const EquivalenceReport& report);

}  // namespace smeans
