#include <gtest/gtest.h>

#include <cmath>

#include "sdereg/error.hpp"
#include "sdereg/integrator.hpp"
#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"
#include "sdereg/rng.hpp"
#include "sdereg/variational.hpp"

using namespace sdereg;

namespace {

struct Draw {
  DriftModel model;
  std::vector<double> x, h;
  BrownianPath path;
};

Draw random_draw(RandomStream& rng, std::uint64_t seed, std::size_t N) {
  const auto names = catalog_names();
  const std::string name = names[rng.next_u64() % names.size()];
  const bool vector_ok = name == "zero" || name == "ou_nd" || name == "bounded_tanh";
  const std::size_t d = vector_ok ? 1 + rng.next_u64() % 3 : 1;
  Draw out{catalog_model(name, {d}), std::vector<double>(d), std::vector<double>(d), {}};
  for (std::size_t i = 0; i < d; ++i) {
    out.x[i] = 4.0 * rng.uniform() - 2.0;
    out.h[i] = rng.gaussian();
  }
  out.path = sample_path(seed, TimeGrid(1.0, N), out.model.m);
  return out;
}

}  // namespace

TEST(Variational, ZeroModelKeepsDirection) {
  const DriftModel m = catalog_model("zero", {2});
  const double x[2] = {1, 2}, h[2] = {0.5, -3};
  const auto p = sample_path(1, TimeGrid(1.0, 100), 2);
  const auto var = variational_solve(m, euler_solve(m, x, p), h);
  for (std::size_t n = 0; n <= 100; ++n) {
    EXPECT_EQ(var.column(n)[0], 0.5);
    EXPECT_EQ(var.column(n)[1], -3.0);
  }
  EXPECT_EQ(*var.direction, (std::vector<double>{0.5, -3}));
}

TEST(Variational, LinearClosedForm) {
  const DriftModel m = catalog_model("linear1d");
  const double x[1] = {1}, h[1] = {1};
  const auto sol = euler_solve(m, x, zero_path(TimeGrid(1.0, 10000), 1));
  EXPECT_NEAR(variational_solve(m, sol, h).values.back(), std::exp(-1.0), 1e-3);
}

TEST(Variational, CubicClosedForm) {
  const DriftModel m = catalog_model("cubic_deterministic");
  const double x[1] = {1}, h[1] = {1};
  const auto sol = euler_solve(m, x, zero_path(TimeGrid(1.0, 10000), 1));
  EXPECT_NEAR(variational_solve(m, sol, h).values.back(), std::pow(3.0, -1.5), 1e-3);
  EXPECT_NEAR(std::pow(3.0, -1.5), 0.192450, 1e-6);
}

TEST(Variational, LinearInDirection) {
  for (const char* name : {"ou_nd", "bounded_tanh", "zero"}) {
    const DriftModel m = catalog_model(name, {3});
    const double x[3] = {0.3, -1.2, 0.8};
    const double h1[3] = {1, 0.5, -2}, h2[3] = {-0.7, 3, 0.25};
    const double a = 1.75, b = -0.6;
    double hc[3];
    for (int i = 0; i < 3; ++i) hc[i] = a * h1[i] + b * h2[i];
    const auto sol = euler_solve(m, x, sample_path(4, TimeGrid(1.0, 512), 3));
    const auto v1 = variational_solve(m, sol, h1), v2 = variational_solve(m, sol, h2),
               vc = variational_solve(m, sol, hc);
    for (std::size_t k = 0; k < vc.values.size(); ++k) {
      const double expect = a * v1.values[k] + b * v2.values[k];
      ASSERT_NEAR(vc.values[k], expect, 1e-14 * (1.0 + std::abs(expect))) << name;
    }
  }
}

TEST(Variational, FullFlowColumnsMatchDirections) {
  const DriftModel m = catalog_model("bounded_tanh", {2});
  const double x[2] = {0.4, -0.9};
  const auto sol = euler_solve(m, x, sample_path(5, TimeGrid(1.0, 200), 2));
  const auto flow = variational_flow(m, sol);
  EXPECT_EQ(flow.columns, 2u);
  EXPECT_FALSE(flow.direction.has_value());
  for (std::size_t j = 0; j < 2; ++j) {
    double e[2] = {0, 0};
    e[j] = 1;
    const auto v = variational_solve(m, sol, e);
    for (std::size_t n = 0; n <= 200; ++n)
      for (std::size_t i = 0; i < 2; ++i) ASSERT_EQ(flow.column(n, j)[i], v.column(n)[i]);
  }
}

TEST(FiniteDifference, TrivialModels) {
  const auto p = sample_path(3, TimeGrid(1.0, 256), 1);
  const double x[1] = {0.7}, h[1] = {1.3};
  // Only roundoff from adding W to the two drift-free solutions remains.
  EXPECT_LE(finite_difference_check(catalog_model("zero"), x, h, p, 1e-3), 1e-12);
  EXPECT_LE(finite_difference_check(catalog_model("linear1d"), x, h, p, 1e-5), 1e-9);
  EXPECT_LE(finite_difference_check(catalog_model("linear1d"), x, h, p, 0.5), 1e-12);
}

TEST(FiniteDifference, OscillatoryFirstOrder) {
  const DriftModel m = catalog_model("oscillatory1d");
  const double x[1] = {0.3}, h[1] = {1.0};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = sample_path(seed, TimeGrid(1.0, 4096), 1);
    const double e1 = finite_difference_check(m, x, h, p, 1e-5);
    const double e2 = finite_difference_check(m, x, h, p, 5e-6);
    EXPECT_LE(e1, 1e-3);
    EXPECT_LE(e2, e1);
    EXPECT_GE(e1 / e2, 1.5);
    EXPECT_LE(e1 / e2, 2.5);
  }
  EXPECT_THROW(finite_difference_check(m, x, h, sample_path(0, TimeGrid(1, 8), 1), 0.0),
               PreconditionError);
}

TEST(GrowthBound, Examples) {
  const DriftModel zero = catalog_model("zero");
  const DriftModel lin = catalog_model("linear1d");
  const double x[1] = {1}, h[1] = {2};
  const auto p = sample_path(8, TimeGrid(1.0, 300), 1);
  const auto sz = euler_solve(zero, x, p);
  EXPECT_TRUE(growth_bound_check(zero, sz, variational_solve(zero, sz, h)).ok);
  const auto sl = euler_solve(lin, x, p);
  auto var = variational_solve(lin, sl, h);
  const auto g = growth_bound_check(lin, sl, var);
  EXPECT_TRUE(g.ok);
  EXPECT_GE(g.margin, 0.0);
  for (double& v : var.values) v *= 1e10;
  EXPECT_FALSE(growth_bound_check(lin, sl, var).ok);
}

TEST(GrowthBound, RandomCatalogDraws) {
  RandomStream rng(2, 0);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const Draw d = random_draw(rng, k, 128);
    const auto sol = euler_solve(d.model, d.x, d.path);
    ASSERT_TRUE(growth_bound_check(d.model, sol, variational_solve(d.model, sol, d.h)).ok)
        << d.model.name << " draw " << k;
  }
}

TEST(PathwiseDistance, Examples) {
  const auto p = sample_path(1, TimeGrid(1.0, 200), 1);
  const double x[1] = {1.0}, y[1] = {0.9};
  const auto same = pathwise_distance_bound(catalog_model("linear1d"), x, x, p, 5);
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_EQ(same.rhs, 0.0);
  EXPECT_TRUE(same.ok);

  const auto z = pathwise_distance_bound(catalog_model("zero"), x, y, p, 5);
  EXPECT_NEAR(z.lhs, 0.1, 1e-15);
  EXPECT_NEAR(z.rhs, 0.1, 1e-15);
  EXPECT_TRUE(z.ok);

  const auto l = pathwise_distance_bound(catalog_model("linear1d"), x, y, zero_path(p.grid, 1), 5);
  EXPECT_NEAR(l.lhs, 0.1, 1e-15);
  EXPECT_GE(l.rhs, 0.1);
  EXPECT_TRUE(l.ok);
  EXPECT_THROW(pathwise_distance_bound(catalog_model("zero"), x, y, p, 1), PreconditionError);
}

TEST(PathwiseDistance, RandomCatalogDraws) {
  RandomStream rng(3, 0);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Draw d = random_draw(rng, k, 128);
    std::vector<double> y = d.x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * d.h[i];
    const auto b = pathwise_distance_bound(d.model, d.x, y, d.path, 33);
    ASSERT_TRUE(b.ok) << d.model.name << " draw " << k << " " << b.lhs << " > " << b.rhs;
  }
}
