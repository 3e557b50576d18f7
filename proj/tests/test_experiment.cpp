#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "smeans/distributions.hpp"
#include "smeans/experiment.hpp"
#include "smeans/function_spaces.hpp"
#include "smeans/multiplier_ops.hpp"
#include "smeans/signals.hpp"
#include "test_support.hpp"

using namespace smeans;
using smeans::testing::HeatErrorOracle;

namespace {

ExperimentConfig heat_config() {
  ExperimentConfig c;
  c.grid = GridSpec(1, 512, 128.0);
  c.signal = "bump:48";
  c.alpha = 0.5;
  c.beta = 1.5;
  c.schedule = {0.1, 0.25, 6};
  return c;
}

std::vector<double> errors_of(const ConvergenceReport& r) {
  std::vector<double> e;
  for (const auto& rec : r.records) e.push_back(rec.error);
  return e;
}

}  // namespace

TEST(Signals, SupportAndSymmetry) {
  const GridSpec spec(1, 128, 16.0);
  for (const char* id : {"bump", "truncated_cone:3", "random_bandlimited:3:5", "fractional:1.2"}) {
    const GridFunction u = make_signal(id, spec);
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_EQ(u[i].imag(), 0.0) << id;
      if (std::abs(spec.point(i)[0]) >= 6.0) EXPECT_EQ(u[i].real(), 0.0) << id;
    }
  }
  EXPECT_THROW(make_signal("bump:7", spec), std::invalid_argument);
  EXPECT_THROW(make_signal("sawtooth", spec), std::invalid_argument);
  EXPECT_THROW(make_signal("random_bandlimited:1", spec), std::invalid_argument);
}

TEST(Signals, SeededSignalsAreReproducibleAndDistinct) {
  const GridSpec spec(2, 32, 8.0);
  const GridFunction a = make_signal("random_bandlimited:7:4", spec);
  const GridFunction b = make_signal("random_bandlimited:7:4", spec);
  const GridFunction c = make_signal("random_bandlimited:8:4", spec);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    diff = std::max(diff, std::abs(a[i] - c[i]));
  }
  EXPECT_GT(diff, 1e-3);
}

TEST(Signals, RefinementSamplesTheSameFunction) {
  const GridSpec spec(1, 64, 8.0);
  const GridFunction u = make_signal("truncated_cone", spec);
  const GridFunction v = make_signal("truncated_cone", spec.refined());
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_DOUBLE_EQ(u[i].real(), v[2 * i].real());
}

TEST(DecreasingToFloor, Rules) {
  EXPECT_TRUE(decreasing_to_floor({1.0, 0.5, 0.25}, 0.25, false));
  EXPECT_FALSE(decreasing_to_floor({1.0, 0.5, 0.5}, 0.5, false));
  EXPECT_TRUE(decreasing_to_floor({1.0, 0.5, 0.5}, 0.5, true));
  EXPECT_TRUE(decreasing_to_floor({1.0, 1e-13, 2e-13}, 2e-13, false));
  EXPECT_FALSE(decreasing_to_floor({1.0, 1e-3, 2e-3}, 1e-4, true));
  EXPECT_TRUE(decreasing_to_floor({}, 0.0, false));
}

TEST(FitSlope, RecoversPowerLaw) {
  std::vector<double> t, e;
  for (int i = 0; i < 8; ++i) {
    t.push_back(std::pow(0.5, i));
    e.push_back(3.0 * std::pow(t.back(), 0.75));
  }
  EXPECT_NEAR(fit_slope(t, e, e.back(), false), 0.75, 1e-12);
  // Points below ten times a validated floor are dropped.
  e.back() = e[6];
  EXPECT_NEAR(fit_slope(t, e, 0.02, true), 0.75, 1e-12);
  EXPECT_TRUE(std::isnan(fit_slope({1.0}, {1.0}, 0.0, false)));
  EXPECT_THROW(fit_slope({1.0, 2.0}, {1.0}, 0.0, false), std::invalid_argument);
}

TEST(ConvergeFunction, HeatMeanMatchesModeSumOracle) {
  ExperimentConfig c = heat_config();
  const HeatErrorOracle oracle(make_signal(c.signal, c.grid));
  const ConvergenceReport liou = run_convergence_function(c);
  c.space = "besov";
  c.q = 2.0;
  const ConvergenceReport besov = run_convergence_function(c);
  ASSERT_EQ(liou.records.size(), 6u);
  for (std::size_t i = 0; i < liou.records.size(); ++i) {
    const double t = liou.records[i].t;
    EXPECT_NEAR(liou.records[i].error / oracle.liouville(t, 0.5), 1.0, 1e-8);
    EXPECT_NEAR(besov.records[i].error / oracle.besov(t, 0.5), 1.0, 1e-8);
  }
  for (const auto* r : {&liou, &besov}) {
    const auto e = errors_of(*r);
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i], e[i - 1]);
    EXPECT_TRUE(r->monotone);
    EXPECT_TRUE(r->hypotheses.all_pass());
    EXPECT_LE(e.back() / e.front(), 1e-3);
    EXPECT_FALSE(r->regression());
  }
  EXPECT_EQ(liou.space, "liouville:0.5:2");
  EXPECT_EQ(besov.norm_route, "lp");
}

TEST(ConvergeFunction, RieszZeroReachesFloorButFailsDerivativeDecay) {
  ExperimentConfig c;
  c.grid = GridSpec(1, 256, 64.0);
  c.signal = "bump:16";
  c.mean = "riesz:0";
  c.theorem = TheoremId::T2;
  c.alpha0 = 0.6;
  c.tau = 0.5;
  c.beta = 1.5;
  c.schedule = {0.1, 0.25, 8};
  const ConvergenceReport r = run_convergence_function(c);
  EXPECT_TRUE(r.hypotheses.all_pass()) << to_json(r.hypotheses).dump();
  EXPECT_TRUE(r.floor_validated);
  EXPECT_TRUE(r.monotone);
  EXPECT_LE(r.floor, 2.0 * r.truncation_error);

  const auto t1 = assemble_hypothesis_report(TheoremId::T1, c.hypothesis_parameters(), parse_mean(c.mean));
  EXPECT_FALSE(t1.all_pass());
}

TEST(ConvergeFunction, SmallTErrorIsLinearInT) {
  ExperimentConfig c;
  c.grid = GridSpec(1, 128, 16.0);
  c.signal = "random_bandlimited:4:3";
  c.schedule = {1e-8, 0.1, 5};
  c.alpha = 0.5;
  const ConvergenceReport r = run_convergence_function(c);
  const double norm = liouville_norm(make_signal(c.signal, c.grid), 0.5, 2.0);
  // 1 - e^{-t s} = t s (1 + O(t s)) mode by mode
  for (std::size_t i = 1; i < r.records.size(); ++i)
    EXPECT_NEAR(r.records[i].error / r.records[i].t, r.records[0].error / r.records[0].t,
                1e-3 * r.records[0].error / r.records[0].t);
  EXPECT_LE(r.records.back().error, 1e-9 * norm);
  ASSERT_TRUE(r.uniform_bound.has_value());
  EXPECT_LE(*r.uniform_bound, 1.0 + 1e-12);
}

TEST(ConvergeFunction, WindowedRunUsesLocalizedNorm) {
  ExperimentConfig c = heat_config();
  c.grid = GridSpec(1, 256, 64.0);
  c.signal = "bump:16";
  c.window = WindowConfig{20.0, std::nullopt};
  const ConvergenceReport r = run_convergence_function(c);
  const GridFunction w = make_window(c.grid, 20.0, 4.0);
  const GridFunction u = make_signal(c.signal, c.grid);
  const double expected = localized_norm(spectral_mean(make_gaussian_mean(), 0.1, parse_symbol("abs:2"), u) - u,
                                         w, LiouvilleNorm{0.5, 2.0});
  EXPECT_NEAR(r.records.front().error, expected, 1e-14 * expected);
}

TEST(ConvergeDistribution, DensityMatchesFunctionRun) {
  ExperimentConfig f;
  f.grid = GridSpec(1, 128, 32.0);
  f.signal = "bump";
  f.alpha = 0.0;
  f.schedule = {0.1, 0.5, 4};
  ExperimentConfig d = f;
  d.kind = ExperimentKind::converge_distribution;
  d.distribution = {{"density_signal", "bump"}};
  const auto a = run_convergence_function(f);
  const auto b = run_convergence_distribution(d);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    EXPECT_NEAR(a.records[i].error, b.records[i].error, 1e-10 * a.records[i].error);
  EXPECT_EQ(b.hypotheses.theorem, TheoremId::T3);
}

TEST(ConvergeDistribution, DeltaLabelsMembership) {
  ExperimentConfig c;
  c.kind = ExperimentKind::converge_distribution;
  c.grid = GridSpec(1, 64, 64.0);
  c.alpha = 0.3;
  c.schedule = {0.1, 0.5, 4};
  const auto r = run_convergence_distribution(c);
  bool flagged = false;
  for (const auto& label : r.labels) flagged |= label.find("outside") != std::string::npos;
  EXPECT_TRUE(flagged);
  c.alpha = 1.0;
  for (const auto& label : run_convergence_distribution(c).labels)
    EXPECT_EQ(label.find("outside"), std::string::npos);
}

TEST(Equivalence, ModulusAndLiouvilleSobolev) {
  ExperimentConfig c;
  c.kind = ExperimentKind::equivalence;
  c.grid = GridSpec(1, 128, 32.0);
  const EquivalenceReport r = run_equivalence(c);
  EXPECT_EQ(r.per_function.size(), 20u);
  const RatioBracket* m = r.find("modulus/lp");
  ASSERT_NE(m, nullptr);
  EXPECT_LE(m->bracket, 20.0);
  EXPECT_NEAR(m->stability, 1.0, 0.2);
  ASSERT_NE(r.find("classical/lp"), nullptr);
  ASSERT_NE(r.find("slobodetskii/lp"), nullptr);
  EXPECT_EQ(r.find("nikolskii/lp"), nullptr);
  EXPECT_LE(r.liouville_sobolev_deviation, 1e-8);
  c.corpus_size = 19;
  EXPECT_THROW(run_equivalence(c), std::invalid_argument);
}

TEST(Config, JsonRoundTripAndErrors) {
  ExperimentConfig c = heat_config();
  c.window = WindowConfig{10.0, 2.0};
  c.q = INFINITY;
  const ExperimentConfig d = config_from_json(to_json(c));
  EXPECT_EQ(to_json(d), to_json(c));
  EXPECT_TRUE(std::isinf(d.q));

  EXPECT_THROW(config_from_json({{"alpah", 0.5}}), std::invalid_argument);
  EXPECT_THROW(config_from_json({{"theorem", "T4"}}), std::invalid_argument);
  EXPECT_THROW(config_from_json({{"alpha", "big"}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), std::invalid_argument);

  ExperimentConfig bad;
  bad.schedule.ratio = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ExperimentConfig{};
  bad.window = WindowConfig{30.0, std::nullopt};  // L = 64, limit 24
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ExperimentConfig{};
  bad.theorem = TheoremId::T3;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ExperimentConfig{};
  bad.mean = "riesz:-1";
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Config, HypothesisDefaults) {
  ExperimentConfig c;
  c.grid = GridSpec(3, 8, 1.0);
  c.p0 = 4.0;
  c.p = 2.0;
  const auto h = c.hypothesis_parameters();
  EXPECT_EQ(h.l, 1);  // floor(3/4) + 1
  EXPECT_DOUBLE_EQ(h.beta, 0.75 + 0.5 + 3.0 * (0.5 - 0.25));
  EXPECT_FALSE(h.alpha0.has_value());
}

TEST(Report, CsvLayout) {
  ExperimentConfig c;
  c.grid = GridSpec(1, 64, 16.0);
  c.schedule = {0.1, 0.5, 3};
  const std::string csv = to_csv(run_convergence_function(c));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,error,space,norm_route,monotone,slope,floor");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n0.10000000000000001,"), std::string::npos);
}

TEST(Report, RegressionFlag) {
  ConvergenceReport r;
  r.monotone = false;
  EXPECT_TRUE(r.regression());
  r.hypotheses.checks.push_back({"x", "", 0.0, 0.0, false, false});
  EXPECT_FALSE(r.regression());
}
