#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sdereg/error.hpp"
#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"

using namespace sdereg;

namespace {

// Independent oracle: standard library engine and Box-Muller-free normal
// distribution, sup over a grid twice as fine as the estimator's.
struct OracleMoments {
  double mean;
  double std_error;
};

template <class F>
OracleMoments oracle_sup_moment(std::size_t steps, std::size_t n, std::uint64_t seed, F f) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(1.0 / double(steps));
  double s = 0, s2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0, sup = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      w += sd * normal(eng);
      sup = std::max(sup, std::abs(w));
    }
    const double v = f(sup);
    s += v;
    s2 += v * v;
  }
  const double mean = s / double(n);
  const double var = (s2 - double(n) * mean * mean) / double(n - 1);
  return {mean, std::sqrt(var / double(n))};
}

}  // namespace

TEST(TimeGrid, Nodes) {
  const TimeGrid g(2.0, 8);
  EXPECT_EQ(g.nodes(), 9u);
  EXPECT_EQ(g.dt(), 0.25);
  EXPECT_EQ(g.time(8), 2.0);
  EXPECT_EQ(g.time(3), 0.75);
  EXPECT_THROW(TimeGrid(1.0, 0), PreconditionError);
  EXPECT_THROW(TimeGrid(-1.0, 4), PreconditionError);
}

TEST(SamplePath, StartsAtZeroAndIsReproducible) {
  const TimeGrid g(1.0, 64);
  const auto a = sample_path(7, g, 3), b = sample_path(7, g, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values.size(), 65u * 3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a.at(0)[j], 0.0);
  EXPECT_NE(sample_path(8, g, 3).values, a.values);
  EXPECT_NE(sample_path(7, g, 3, 1).values, a.values);
}

TEST(SamplePath, ZeroHorizonGivesZeros) {
  const auto p = sample_path(3, TimeGrid(0.0, 10), 2);
  for (double v : p.values) EXPECT_EQ(v, 0.0);
}

TEST(SamplePath, TerminalVarianceEqualsHorizon) {
  const TimeGrid g(1.0, 8);
  const std::size_t n = 100000;
  double s = 0, s2 = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    const double w = sample_path(seed, g, 1).values.back();
    s += w;
    s2 += w * w;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(var, 1.0, 3.0 * std::sqrt(2.0 / n));
}

TEST(SamplePath, IncrementsAreIndependentAcrossCoordinates) {
  const TimeGrid g(1.0, 20000);
  const auto p = sample_path(5, g, 2);
  double c = 0, v0 = 0, v1 = 0;
  for (std::size_t n = 0; n < g.N; ++n) {
    const double a = p.at(n + 1)[0] - p.at(n)[0], b = p.at(n + 1)[1] - p.at(n)[1];
    c += a * b;
    v0 += a * a;
    v1 += b * b;
  }
  EXPECT_NEAR(v0, 1.0, 4.0 * std::sqrt(2.0 / g.N));
  EXPECT_NEAR(v1, 1.0, 4.0 * std::sqrt(2.0 / g.N));
  EXPECT_NEAR(c / std::sqrt(v0 * v1), 0.0, 4.0 / std::sqrt(double(g.N)));
}

TEST(Restrict, IdentityAndSubsampling) {
  const auto p = sample_path(1, TimeGrid(1.0, 64), 2);
  const auto same = restrict(p, 64);
  EXPECT_EQ(same.values, p.values);
  const auto half = restrict(p, 32);
  EXPECT_EQ(half.grid.N, 32u);
  for (std::size_t k = 0; k <= 32; ++k)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(half.at(k)[j], p.at(2 * k)[j]);
  EXPECT_THROW(restrict(p, 48), GridMismatchError);
  EXPECT_THROW(restrict(p, 0), GridMismatchError);
}

TEST(Restrict, CoarseSupNeverExceedsFineSup) {
  const DriftModel m = catalog_model("linear1d");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = sample_path(seed, TimeGrid(1.0, 256), 1);
    const auto fine = path_sup_stats(p, m);
    for (std::size_t coarse : {128, 16, 1}) {
      const auto c = path_sup_stats(restrict(p, coarse), m);
      EXPECT_LE(c.sup_sigma_w, fine.sup_sigma_w);
      EXPECT_LE(c.sup_phi_w, fine.sup_phi_w);
    }
  }
}

TEST(PathSupStats, Examples) {
  const DriftModel lin = catalog_model("linear1d");
  const auto zp = zero_path(TimeGrid(1.0, 4), 1);
  const auto z = path_sup_stats(zp, lin);
  EXPECT_EQ(z.sup_sigma_w, 0.0);
  EXPECT_EQ(z.sup_phi_w, lin.lyapunov.phi_kappa);

  DriftModel twice = lin;
  twice.sigma = Matrix(1, 1, 2.0);
  BrownianPath p{TimeGrid(1.0, 2), 1, {0.0, 1.0, -3.0}, 0, 0};
  EXPECT_EQ(path_sup_stats(p, twice).sup_sigma_w, 6.0);

  const auto r = sample_path(9, TimeGrid(1.0, 100), 1);
  double mx = 0;
  for (double v : r.values) mx = std::max(mx, std::abs(v));
  EXPECT_EQ(path_sup_stats(r, lin).sup_phi_w, 1.0 + mx);

  DriftModel wide = catalog_model("zero", {2});
  EXPECT_THROW(path_sup_stats(r, wide), PreconditionError);
}

TEST(PathSupStats, DoublingSigmaDoublesSup) {
  const DriftModel m = catalog_model("ou_nd", {3});
  DriftModel m2 = m;
  m2.sigma = m.sigma.scaled(2.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = sample_path(seed, TimeGrid(1.0, 50), 3);
    EXPECT_EQ(path_sup_stats(p, m2).sup_sigma_w, 2.0 * path_sup_stats(p, m).sup_sigma_w);
  }
}

TEST(ExpMoment, TrivialCases) {
  const McRun run{500, 3, 1};
  const auto a = estimate_exp_moment(0.0, 1.0, TimeGrid(1.0, 50), 1, run);
  EXPECT_EQ(a.mean, 1.0);
  EXPECT_EQ(a.std_error, 0.0);
  EXPECT_EQ(a.n_samples, 500u);
  EXPECT_EQ(a.seed, 3u);
  const auto b = estimate_exp_moment(2.0, 1.5, TimeGrid(0.0, 50), 2, run);
  EXPECT_EQ(b.mean, 1.0);
  EXPECT_THROW(estimate_exp_moment(1.0, 2.0, TimeGrid(1.0, 4), 1, run), PreconditionError);
  EXPECT_THROW(estimate_exp_moment(-1.0, 1.0, TimeGrid(1.0, 4), 1, run), PreconditionError);
}

TEST(ExpMoment, AgreesWithIndependentOracle) {
  const std::size_t N = 2000, n = 20000;
  const auto est = estimate_exp_moment(1.0, 1.0, TimeGrid(1.0, N), 1, {n, 11, 0});
  const auto ora = oracle_sup_moment(2 * N, n, 12345, [](double s) { return std::exp(s); });
  EXPECT_NEAR(est.mean, ora.mean, 3.0 * std::hypot(est.std_error, ora.std_error));
}

TEST(PolyMoment, TrivialCases) {
  const McRun run{300, 1, 1};
  const TimeGrid g(1.0, 40);
  const auto r0 = estimate_poly_moment(0.0, Matrix::identity(1), g, 1, run);
  EXPECT_EQ(r0.mean, 1.0);
  EXPECT_EQ(r0.std_error, 0.0);
  const auto s0 = estimate_poly_moment(1.5, Matrix(2, 2, 0.0), g, 2, run);
  EXPECT_EQ(s0.mean, 0.0);
  EXPECT_EQ(s0.std_error, 0.0);
}

TEST(PolyMoment, SquareAgreesWithIndependentOracle) {
  const std::size_t N = 2000, n = 20000;
  const auto est = estimate_poly_moment(2.0, Matrix::identity(1), TimeGrid(1.0, N), 1,
                                        {n, 21, 0});
  const auto ora = oracle_sup_moment(2 * N, n, 999, [](double s) { return s * s; });
  EXPECT_NEAR(est.mean, ora.mean, 3.0 * std::hypot(est.std_error, ora.std_error));
}

TEST(PolyMoment, SupAbsNearReflectionValue) {
  const auto est = estimate_poly_moment(1.0, Matrix::identity(1), TimeGrid(1.0, 2000), 1,
                                        {20000, 4, 0});
  const double target = std::sqrt(M_PI / 2.0);
  // Grid sup sits below the continuous sup by about 0.5826 sqrt(T/N).
  EXPECT_LT(est.mean, target + 3.0 * est.std_error);
  EXPECT_NEAR(est.mean, target, 3.0 * est.std_error + 0.03 * target);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  const TimeGrid g(1.0, 100);
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto a = estimate_exp_moment(0.7, 1.2, g, 2, {1000, 5, 1});
    const auto b = estimate_exp_moment(0.7, 1.2, g, 2, {1000, 5, threads});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = estimate_poly_moment(1.0, Matrix::identity(2), g, 2, {777, 5, 1});
    const auto d = estimate_poly_moment(1.0, Matrix::identity(2), g, 2, {777, 5, threads});
    EXPECT_EQ(c.mean, d.mean);
    EXPECT_EQ(c.std_error, d.std_error);
  }
}

TEST(MomentSum, StdErrorFormula) {
  MomentSum s;
  const double xs[] = {1.0, 2.0, 4.0, 7.0};
  for (double x : xs) s.add(x);
  const double mean = 3.5;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_DOUBLE_EQ(s.mean(), mean);
  EXPECT_NEAR(s.std_error(), std::sqrt(ss / 3.0 / 4.0), 1e-12);
  MomentSum one;
  one.add(5.0);
  EXPECT_EQ(one.std_error(), 0.0);
  MomentSum constant;
  for (int i = 0; i < 10; ++i) constant.add(0.1);
  EXPECT_GE(constant.std_error(), 0.0);
}
