#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sdereg/error.hpp"
#include "sdereg/rng.hpp"
#include "sdereg/serialize.hpp"

using namespace sdereg;

TEST(Doubles, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isnan(io::parse_double("nan")));
  EXPECT_EQ(io::parse_double(" -inf "), -std::numeric_limits<double>::infinity());
  RandomStream rng(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double v = std::ldexp(rng.gaussian(), int(rng.next_u64() % 2000) - 1000);
    ASSERT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_THROW(io::parse_double("1.5x"), ConfigError);
  EXPECT_THROW(io::parse_double(""), ConfigError);
}

TEST(Json, NonFiniteNumbersStayValid) {
  const MCEstimate e{std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::infinity(), 10, 3};
  const auto text = io::to_json(e).dump();
  const auto back = io::mc_estimate_from_json(io::Json::parse(text));
  EXPECT_TRUE(std::isnan(back.mean));
  EXPECT_TRUE(std::isinf(back.std_error));
  EXPECT_EQ(back.n_samples, 10u);
  EXPECT_EQ(back.seed, 3u);
}

TEST(Json, ConditionReportRoundTrip) {
  ConditionReport r;
  r.checked_points = 12;
  r.violations.push_back({{1.0, -2.0}, {0.5}, 3.25, 1.125});
  r.violation_count = 5;
  r.max_ratio = 2.888888888888889;
  const auto back = io::condition_report_from_json(io::Json::parse(io::to_json(r).dump()));
  EXPECT_EQ(back.checked_points, 12u);
  EXPECT_EQ(back.violation_count, 5u);
  EXPECT_EQ(back.max_ratio, r.max_ratio);
  ASSERT_EQ(back.violations.size(), 1u);
  EXPECT_EQ(back.violations[0].x, r.violations[0].x);
  EXPECT_EQ(back.violations[0].lhs, 3.25);
  const auto j = io::to_json(r);
  EXPECT_TRUE(j.contains("checked_points"));
  EXPECT_TRUE(j.contains("violations"));
  EXPECT_TRUE(j.contains("max_ratio"));
}

TEST(Json, RegularityReportRoundTrip) {
  RegularityReport r;
  r.model = "oscillatory1d";
  r.ladder = {0.1, 0.01};
  r.empirical = {{0.11, 0.001, 100, 4}, {0.011, 0.0002, 100, 4}};
  r.theoretical = {5.0, 2.5};
  r.rung_pass = {true, true};
  r.fitted_q = std::numeric_limits<double>::quiet_NaN();
  r.fitted_c = 1.0 / 3.0;
  r.pass = true;
  r.constants.K = 17.25;
  r.constants.c_global = 44.0;
  r.constants.K_estimate = {14.375, 0.5, 100, 4};
  const auto back = io::regularity_report_from_json(io::Json::parse(io::to_json(r).dump(2)));
  EXPECT_EQ(back.model, r.model);
  EXPECT_EQ(back.ladder, r.ladder);
  EXPECT_EQ(back.theoretical, r.theoretical);
  EXPECT_EQ(back.rung_pass, r.rung_pass);
  EXPECT_EQ(back.empirical[1].mean, 0.011);
  EXPECT_TRUE(std::isnan(back.fitted_q));
  EXPECT_EQ(back.fitted_c, r.fitted_c);
  EXPECT_EQ(back.constants.K, 17.25);
  EXPECT_EQ(back.constants.K_estimate.mean, 14.375);
  EXPECT_TRUE(back.complete);
}

TEST(Csv, RoundTripAndDiagnostics) {
  io::CsvTable t{{"a", "b"}, {{0.1, 1e300}, {-0.0, 3.0}}};
  const auto text = io::write_csv(t);
  EXPECT_EQ(text, "a,b\n0.1,1e+300\n-0,3\n");
  const auto back = io::read_csv(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  try {
    io::read_csv("a,b\n1,2\n3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    io::read_csv("a,b\n1,zz\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(io::read_csv(""), ConfigError);
}

TEST(Csv, SolutionTableRoundTrip) {
  const DriftModel m = catalog_model("bounded_tanh", {2});
  const double x[2] = {0.25, -1.5};
  const auto sol = euler_solve(m, x, sample_path(3, TimeGrid(2.0, 40), 2));
  const auto table = io::solution_table(sol);
  EXPECT_EQ(table.header, (std::vector<std::string>{"t", "X_1", "X_2"}));
  const auto back = io::solution_from_table(io::read_csv(io::write_csv(table)));
  EXPECT_EQ(back.states, sol.states);
  EXPECT_EQ(back.grid, sol.grid);
  EXPECT_EQ(back.initial, sol.initial);
}

TEST(Csv, PathAndVariationalHeaders) {
  const auto p = sample_path(1, TimeGrid(1, 4), 3);
  EXPECT_EQ(io::path_table(p).header, (std::vector<std::string>{"t", "W_1", "W_2", "W_3"}));
  EXPECT_EQ(io::path_table(p).rows.size(), 5u);
  const DriftModel m = catalog_model("ou_nd", {2});
  const double x[2] = {1, 2};
  const auto sol = euler_solve(m, x, sample_path(1, TimeGrid(1, 4), 2));
  const auto flow = io::variational_table(variational_flow(m, sol));
  EXPECT_EQ(flow.header,
            (std::vector<std::string>{"t", "D_1_1", "D_2_1", "D_1_2", "D_2_2"}));
  EXPECT_EQ(flow.rows[0], (std::vector<double>{0, 1, 0, 0, 1}));
  const double h[2] = {1, 0};
  EXPECT_EQ(io::variational_table(variational_solve(m, sol, h)).header,
            (std::vector<std::string>{"t", "D_1", "D_2"}));
}

TEST(Csv, ReportTableRoundTrip) {
  RegularityReport r;
  r.ladder = {0.1, 0.001};
  r.empirical = {{0.1, 0.0, 5, 1}, {0.00125, 1e-5, 5, 1}};
  r.theoretical = {3.0, 1.0};
  r.rung_pass = {true, false};
  const auto back = io::report_from_table(io::read_csv(io::write_csv(io::report_table(r))));
  EXPECT_EQ(back.ladder, r.ladder);
  EXPECT_EQ(back.theoretical, r.theoretical);
  EXPECT_EQ(back.rung_pass, r.rung_pass);
  EXPECT_EQ(back.empirical[1].std_error, 1e-5);
  EXPECT_FALSE(back.pass);
  EXPECT_THROW(io::report_from_table({{"x"}, {}}), ConfigError);
}
