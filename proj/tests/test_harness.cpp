#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hamext/errors.hpp"
#include "hamext/harness.hpp"

using namespace hamext;

namespace {

ExperimentConfig short_config(double t_end = 60.0) {
  ExperimentConfig c = ExperimentConfig::ranking();
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST(Config, Defaults) {
  const ExperimentConfig c = ExperimentConfig::ranking();
  EXPECT_EQ(c.method_ids.size(), 14u);
  EXPECT_EQ(c.step_count(), 166667u);
  EXPECT_EQ(c.reference_ratio(), 15u);
  EXPECT_DOUBLE_EQ(c.initial_point().u, -hamiltonian(c.oscillator().problem(),
                                                      PhasePoint(c.q0, c.p0), 0.0));
  const ExperimentConfig l = ExperimentConfig::long_time();
  EXPECT_EQ(l.step_count(), 10000u);
  EXPECT_EQ(l.reference_ratio(), 10u);
}

TEST(Config, ParseOverridesAndComments) {
  std::istringstream in(
      "# comment\n"
      "epsilon = 0.25\n"
      "q0 = 1, 0\n"
      "p0 = 0,1   # trailing\n"
      "n = 2\n"
      "\n"
      "methods = lie_gauss, midpoint\n");
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.epsilon, 0.25);
  EXPECT_EQ(c.n, 2u);
  EXPECT_EQ(c.q0, (Vector{1, 0}));
  EXPECT_EQ(c.method_ids, (std::vector<std::string>{"lie_gauss", "midpoint"}));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, WriteParseRoundTrip) {
  ExperimentConfig c = ExperimentConfig::ranking();
  c.alpha = 0.1 + 0.2;
  std::ostringstream out;
  write_config(out, c);
  std::istringstream in(out.str());
  const ExperimentConfig back = parse_config(in);
  EXPECT_EQ(back.alpha, c.alpha);
  EXPECT_EQ(back.method_ids, c.method_ids);
  EXPECT_EQ(back.q0, c.q0);
}

TEST(Config, Errors) {
  ExperimentConfig c;
  EXPECT_THROW(set_config_value(c, "bogus", "1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "h", "abc"), ConfigError);
  std::istringstream in("no equals sign\n");
  EXPECT_THROW((void)parse_config(in), ConfigError);
  c.method_ids = {"rk4"};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.reference_h = 0.07;
  EXPECT_THROW((void)c.reference_ratio(), ConfigError);
  c = ExperimentConfig{};
  c.q0 = {1.0};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW((void)load_config("/nonexistent/cfg"), ConfigError);
}

TEST(Config, NonIntegerIntervalRoundsUp) {
  ExperimentConfig c;
  c.t_end = 1.0;
  EXPECT_EQ(c.step_count(), 4u);
  c.t_end = 0.9;
  EXPECT_EQ(c.step_count(), 3u);
}

TEST(Smoothing, BlockMaxima) {
  const std::vector<double> t{0, 1, 2, 3, 4, 5, 6};
  const std::vector<double> e{0.1, -0.5, 0.2, 0.3, 0.0, 0.05, 0.7};
  const SmoothedErrorSeries s = smooth_block_max(t, e, 3);
  EXPECT_EQ(s.block_times, (std::vector<double>{0, 3, 6}));
  EXPECT_EQ(s.block_max_errors, (std::vector<double>{0.5, 0.3, 0.7}));
  EXPECT_EQ(s.max_error(), 0.7);
  EXPECT_THROW((void)smooth_block_max(t, e, 0), InvalidArgument);
  EXPECT_THROW((void)smooth_block_max({}, {}, 3), EmptyInput);
}

TEST(Smoothing, MaxOfBlocksEqualsMaxOfSeries) {
  std::vector<double> t, e;
  for (int k = 0; k < 1234; ++k) {
    t.push_back(k);
    e.push_back(std::sin(0.37 * k) * (1 + 0.001 * k));
  }
  double m = 0.0;
  for (double x : e) m = std::max(m, std::abs(x));
  for (std::size_t b : {1u, 7u, 500u, 5000u}) EXPECT_EQ(smooth_block_max(t, e, b).max_error(), m);
}

TEST(PhaseCeiling, PeakToPeakOfOscillation) {
  std::vector<double> t, h;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.05 * k);
    h.push_back(30.0 + 0.4 * t.back() + 0.07 * std::cos(2.0 * t.back()));
  }
  // The quadratic fit absorbs a little of the oscillation.
  EXPECT_NEAR(phase_ceiling(t, h), 0.14, 0.015);
  std::vector<double> trend(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) trend[k] = 1.0 + t[k] - 0.3 * t[k] * t[k];
  EXPECT_LT(phase_ceiling(t, trend), 1e-10);
}

TEST(Tiers, Boundaries) {
  EXPECT_EQ(classify_tier(0.0, 0.15), Tier::Top);
  EXPECT_EQ(classify_tier(0.134, 0.15), Tier::Top);
  EXPECT_EQ(classify_tier(0.135, 0.15), Tier::Middle);
  EXPECT_EQ(classify_tier(0.299, 0.15), Tier::Middle);
  EXPECT_EQ(classify_tier(0.3, 0.15), Tier::Bottom);
}

TEST(Trajectory, ColumnsAndStart) {
  const ExperimentConfig c = short_config(3.0);
  const EnergySeries s = run_trajectory(c, "lie_gauss");
  ASSERT_EQ(s.size(), 11u);
  EXPECT_EQ(s.times.front(), 0.0);
  EXPECT_NEAR(s.times.back(), 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.h_values.front(), 30.0);
  ASSERT_TRUE(s.k_values);
  EXPECT_DOUBLE_EQ(s.k_values->front(), 0.0);
  EXPECT_FALSE(run_trajectory(c, "exp_noncan").u_values.has_value());
}

TEST(Reference, IndependentOfCoarseStepOnShortInterval) {
  const ExperimentConfig c = short_config(30.0);
  const std::vector<double> ref = run_reference(c);
  ExperimentConfig finer = c;
  finer.reference_h = 0.01;
  const std::vector<double> ref2 = run_reference(finer);
  ASSERT_EQ(ref.size(), ref2.size());
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(ref[k], ref2[k], 1e-7);
}

TEST(Table, ShortRunRanksAndReportsCeiling) {
  ExperimentConfig c = short_config(150.0);
  c.method_ids = {"radau2a", "lie_gauss", "midpoint"};
  const TableResult t = table_one(c);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows.front().descriptor.id, "lie_gauss");
  EXPECT_NEAR(t.phase_ceiling, 0.15, 0.02);
  EXPECT_LT(*t.row("lie_gauss").max_error, 1e-4);
  EXPECT_THROW((void)t.row("kahan"), InvalidArgument);
}

TEST(Output, CsvIsDeterministic) {
  ExperimentConfig c = short_config(6.0);
  c.method_ids = {"lie_midpoint", "symplectic_euler"};
  std::ostringstream a, b;
  write_table_csv(a, table_one(c));
  write_table_csv(b, table_one(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("method,order,properties,max_energy_error,tier,error\n", 0), 0u);

  EnergySeries s = run_trajectory(c, "symplectic_euler");
  std::ostringstream csv;
  write_series_csv(csv, s);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "t,H,u,K,H_ref");
  EXPECT_EQ(first, "0,30,,,");
}

TEST(Output, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.3), "0.3");
}
