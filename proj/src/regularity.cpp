#include "sdereg/regularity.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <limits>

#include "sdereg/error.hpp"
#include "sdereg/integrator.hpp"
#include "sdereg/kernels.hpp"
#include "sdereg/rng.hpp"

namespace sdereg {

namespace {

constexpr double kMaxExcludedFraction = 0.01;

void check_excluded(std::size_t excluded, std::size_t n_samples) {
  if (static_cast<double>(excluded) >
      kMaxExcludedFraction * static_cast<double>(n_samples))
    throw EstimatorError(std::to_string(excluded) + " of " +
                         std::to_string(n_samples) +
                         " samples diverged (limit 1%); refine the grid");
}

// Per-node sums for a coupled pair of solutions.
struct NodeSums {
  std::vector<double> sum, sumsq;
  std::size_t count = 0;
  std::size_t excluded = 0;

  explicit NodeSums(std::size_t nodes = 0) : sum(nodes, 0.0), sumsq(nodes, 0.0) {}

  void merge(NodeSums&& o) {
    kernels::add_inplace(sum, o.sum);
    kernels::add_inplace(sumsq, o.sumsq);
    count += o.count;
    excluded += o.excluded;
  }
};

struct CoupledWorkspace {
  std::vector<double> w, xs, ys, diff;
  EulerWorkspace euler;

  CoupledWorkspace(const DriftModel& model, const TimeGrid& grid)
      : w(grid.nodes() * model.m),
        xs(grid.nodes() * model.d),
        ys(grid.nodes() * model.d),
        diff(grid.nodes()),
        euler(model.d) {}
};

// Solves from x and y on the path of sample i and leaves the per-node
// distances in ws.diff. Returns false if either solve diverged.
bool coupled_sample(const DriftModel& model, std::span<const double> x,
                    std::span<const double> y, const TimeGrid& grid,
                    std::uint64_t seed, std::size_t i, CoupledWorkspace& ws) {
  RandomStream rng(seed, i);
  fill_path(rng, grid, model.m, ws.w);
  try {
    euler_solve_into(model, x, grid, ws.w, ws.xs, ws.euler);
    euler_solve_into(model, y, grid, ws.w, ws.ys, ws.euler);
  } catch (const DivergenceError&) {
    return false;
  }
  const std::size_t d = model.d;
  if (d == 1) {
    kernels::abs_diff(ws.xs, ws.ys, ws.diff);
  } else {
    const std::span<const double> xs(ws.xs), ys(ws.ys);
    for (std::size_t n = 0; n < grid.nodes(); ++n)
      ws.diff[n] = distance(model.norm_state.kind, xs.subspan(n * d, d),
                            ys.subspan(n * d, d));
  }
  return true;
}

void check_pair(const DriftModel& model, std::span<const double> x,
                std::span<const double> y) {
  if (x.size() != model.d || y.size() != model.d)
    throw PreconditionError("initial values have wrong dimension");
}

// Per-sample maximum of ||X^x(t_n)|| over lattice points and nodes, reduced
// through `transforms` into one MomentSum each.
template <std::size_t K>
struct LatticeResult {
  std::array<MomentSum, K> moments;
  std::size_t excluded = 0;
};

template <std::size_t K, class Transform>
LatticeResult<K> lattice_sup_mc(const DriftModel& model,
                                           const PointSet& lattice,
                                           const TimeGrid& grid, const McRun& run,
                                           Transform transform) {
  if (run.n_samples == 0) throw PreconditionError("n_samples must be positive");
  struct Workspace {
    std::vector<double> w, xs, norms;
    EulerWorkspace euler;
  };
  using Result = LatticeResult<K>;
  const std::size_t d = model.d;
  Result total = run_blocks(
      run.n_samples, run.threads, [] { return Result{}; },
      [&] {
        return Workspace{std::vector<double>(grid.nodes() * model.m),
                         std::vector<double>(grid.nodes() * d),
                         std::vector<double>(grid.nodes()), EulerWorkspace(d)};
      },
      [&](std::size_t i, Result& acc, Workspace& ws) {
        RandomStream rng(run.seed, i);
        fill_path(rng, grid, model.m, ws.w);
        double sup = 0.0;
        try {
          for (const auto& x0 : lattice) {
            euler_solve_into(model, x0, grid, ws.w, ws.xs, ws.euler);
            double s;
            if (d == 1) {
              s = kernels::max_abs(ws.xs);
            } else {
              const std::span<const double> xs(ws.xs);
              for (std::size_t n = 0; n < grid.nodes(); ++n)
                ws.norms[n] = model.norm_state(xs.subspan(n * d, d));
              s = kernels::max_value(ws.norms);
            }
            sup = std::max(sup, s);
          }
        } catch (const DivergenceError&) {
          ++acc.excluded;
          return;
        }
        const std::array<double, K> values = transform(sup);
        for (std::size_t k = 0; k < K; ++k) acc.moments[k].add(values[k]);
      },
      [](Result& t, Result&& p) {
        for (std::size_t k = 0; k < K; ++k) t.moments[k].merge(p.moments[k]);
        t.excluded += p.excluded;
      });
  check_excluded(total.excluded, run.n_samples);
  return total;
}

}  // namespace

DistanceEstimate estimate_distance(const DriftModel& model, std::span<const double> x,
                                   std::span<const double> y, const TimeGrid& grid,
                                   const McRun& run) {
  check_pair(model, x, y);
  if (run.n_samples < 2) throw PreconditionError("need at least two samples");
  const std::size_t nodes = grid.nodes();
  // Sums are taken about the first sample's distances so that the variance
  // does not cancel when the distances barely vary.
  std::vector<double> shift(nodes, 0.0);
  {
    CoupledWorkspace pilot(model, grid);
    if (coupled_sample(model, x, y, grid, run.seed, 0, pilot)) shift = pilot.diff;
  }
  NodeSums total = run_blocks(
      run.n_samples, run.threads, [&] { return NodeSums(nodes); },
      [&] { return CoupledWorkspace(model, grid); },
      [&](std::size_t i, NodeSums& acc, CoupledWorkspace& ws) {
        if (!coupled_sample(model, x, y, grid, run.seed, i, ws)) {
          ++acc.excluded;
          return;
        }
        for (std::size_t k = 0; k < nodes; ++k) ws.diff[k] -= shift[k];
        kernels::accumulate_moments(ws.diff, acc.sum, acc.sumsq);
        ++acc.count;
      },
      [](NodeSums& t, NodeSums&& p) { t.merge(std::move(p)); });
  check_excluded(total.excluded, run.n_samples);
  if (total.count < 2) throw EstimatorError("fewer than two usable samples");

  DistanceEstimate out;
  out.excluded = total.excluded;
  out.node_means.resize(nodes);
  const double n = static_cast<double>(total.count);
  for (std::size_t k = 0; k < nodes; ++k) {
    out.node_means[k] = shift[k] + total.sum[k] / n;
    if (out.node_means[k] > out.node_means[out.argmax_node]) out.argmax_node = k;
  }
  const std::size_t a = out.argmax_node;
  out.estimate = {out.node_means[a],
                  std_error_from_sums(total.sum[a], total.sumsq[a], total.count),
                  total.count, run.seed};
  return out;
}

KEstimate estimate_K(const DriftModel& model, double R, double q, const TimeGrid& grid,
                     std::size_t x_grid_points, const McRun& run, double safety) {
  if (!(R >= 0.0) || !(q >= 0.0)) throw PreconditionError("R and q must be nonnegative");
  if (x_grid_points == 0) throw PreconditionError("x_grid_points must be at least 1");
  if (!(safety >= 1.0)) throw PreconditionError("safety factor must be at least 1");
  const PointSet lattice = ball_lattice(model.d, R + 1.0, x_grid_points, model.norm_state);
  const double power = 4.0 * q + 4.0;
  const double kappa = model.kappa;
  // phi_state is nondecreasing in ||x||, so its maximum sits at the largest norm.
  auto result = lattice_sup_mc<2>(model, lattice, grid, run, [&](double s) {
    const double phi = kappa * (1.0 + std::pow(s, kappa));
    return std::array<double, 2>{std::pow(phi, power), s * s};
  });
  KEstimate out;
  out.phi_moment = result.moments[0].estimate(run.seed);
  out.square_moment = result.moments[1].estimate(run.seed);
  out.raw = out.phi_moment.mean >= out.square_moment.mean ? out.phi_moment
                                                          : out.square_moment;
  out.raw.std_error = std::max(out.phi_moment.std_error, out.square_moment.std_error);
  out.safety = safety;
  out.K = safety * out.raw.mean;
  out.lattice_size = lattice.size();
  out.excluded = result.excluded;
  return out;
}

TheoreticalConstant theoretical_constant(double K, double q, double T) {
  if (!(K >= 0.0) || !(q >= 0.0) || !(T >= 0.0))
    throw PreconditionError("K, q and T must be nonnegative");
  const double p = 4.0 * q + 4.0;
  TheoreticalConstant out;
  out.Kcal = 1.0 + std::pow(2.0, p) *
                       (std::pow(std::abs(std::log(2.0 + std::exp(q))), p) +
                        std::pow(T, p) * K);
  out.c_local = 2.0 * std::sqrt((1.0 + 4.0 * K) * out.Kcal);
  return out;
}

double global_bound_constant(double c_local, double C, double R, double q) {
  if (!(c_local >= 0.0) || !(C >= 0.0) || !(R >= 0.0) || !(q >= 0.0))
    throw PreconditionError("constants must be nonnegative");
  return std::max(c_local, 2.0 * C * std::pow(std::abs(std::log(2.0 * R + 1.0)), q));
}

MCEstimate moment_bound_check(const DriftModel& model, double R, double r,
                              const TimeGrid& grid, std::size_t x_grid_points,
                              const McRun& run) {
  if (!(r >= 0.0)) throw PreconditionError("r must be nonnegative");
  if (!(R >= 0.0)) throw PreconditionError("R must be nonnegative");
  if (x_grid_points == 0) throw PreconditionError("x_grid_points must be at least 1");
  const PointSet lattice = ball_lattice(model.d, R, x_grid_points, model.norm_state);
  auto result = lattice_sup_mc<1>(model, lattice, grid, run, [&](double s) {
    return std::array<double, 1>{std::pow(s, r)};
  });
  return result.moments[0].estimate(run.seed);
}

double fg_F(double y) { return std::log1p(y); }

double fg_G(double y) { return y == 0.0 ? 1.0 : y / std::log1p(y); }

FgDecompositionCheck fg_decomposition_check(const DriftModel& model,
                                            std::span<const double> x,
                                            std::span<const double> y,
                                            const TimeGrid& grid, const McRun& run) {
  check_pair(model, x, y);
  if (run.n_samples < 2) throw PreconditionError("need at least two samples");
  const std::size_t nodes = grid.nodes();
  struct Sums {
    std::vector<double> delta, delta_sq, f, f_sq, g, g_sq;
    std::size_t count = 0, excluded = 0;
  };
  struct Workspace {
    CoupledWorkspace coupled;
    std::vector<double> f, g;
  };
  auto make = [&] {
    const std::vector<double> z(nodes, 0.0);
    return Sums{z, z, z, z, z, z};
  };
  Sums total = run_blocks(
      run.n_samples, run.threads, make,
      [&] {
        return Workspace{CoupledWorkspace(model, grid), std::vector<double>(nodes),
                         std::vector<double>(nodes)};
      },
      [&](std::size_t i, Sums& acc, Workspace& ws) {
        if (!coupled_sample(model, x, y, grid, run.seed, i, ws.coupled)) {
          ++acc.excluded;
          return;
        }
        for (std::size_t k = 0; k < nodes; ++k) {
          ws.f[k] = fg_F(ws.coupled.diff[k]);
          ws.g[k] = fg_G(ws.coupled.diff[k]);
        }
        kernels::accumulate_moments(ws.coupled.diff, acc.delta, acc.delta_sq);
        kernels::accumulate_moments(ws.f, acc.f, acc.f_sq);
        kernels::accumulate_moments(ws.g, acc.g, acc.g_sq);
        ++acc.count;
      },
      [](Sums& t, Sums&& p) {
        kernels::add_inplace(t.delta, p.delta);
        kernels::add_inplace(t.delta_sq, p.delta_sq);
        kernels::add_inplace(t.f, p.f);
        kernels::add_inplace(t.f_sq, p.f_sq);
        kernels::add_inplace(t.g, p.g);
        kernels::add_inplace(t.g_sq, p.g_sq);
        t.count += p.count;
        t.excluded += p.excluded;
      });
  check_excluded(total.excluded, run.n_samples);
  if (total.count == 0) throw EstimatorError("no usable samples");

  FgDecompositionCheck out;
  out.node_lhs.resize(nodes);
  out.node_rhs.resize(nodes);
  const double n = static_cast<double>(total.count);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes; ++k) {
    const double lhs = total.delta[k] / n;
    const double rhs = std::sqrt((total.g_sq[k] / n) * (total.f_sq[k] / n));
    out.node_lhs[k] = lhs;
    out.node_rhs[k] = rhs;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > worst) {
      worst = ratio;
      out.lhs = lhs;
      out.rhs = rhs;
    }
    if (!(lhs <= rhs * (1.0 + 1e-9))) out.ok = false;
  }
  return out;
}

std::pair<double, double> fit_log_modulus(const std::vector<double>& ladder,
                                          const std::vector<double>& values) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ladder.size() && i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !(ladder[i] > 0.0) || ladder[i] == 1.0) continue;
    xs.push_back(std::log(std::abs(std::log(ladder[i]))));
    ys.push_back(std::log(values[i]));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() < 2) return {nan, nan};
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return {nan, nan};
  const double slope = sxy / sxx;
  return {-slope, std::exp(my - slope * mx)};
}

std::vector<double> default_ladder() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
}

RegularityReport verify_modulus(const DriftModel& model,
                                std::span<const double> x_center,
                                std::span<const double> direction,
                                const std::vector<double>& ladder, double q, double R,
                                const TimeGrid& grid, const McRun& run,
                                const ModulusOptions& opts) {
  const std::size_t d = model.d;
  if (x_center.size() != d || direction.size() != d)
    throw PreconditionError("x_center and direction must have dimension d");
  if (ladder.empty()) throw PreconditionError("ladder must not be empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0 && ladder[i] < 1.0))
      throw PreconditionError("ladder entries must lie in (0, 1)");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw PreconditionError("ladder must be strictly decreasing");
  }
  if (!(q >= 0.0)) throw PreconditionError("q must be nonnegative");
  if (!(model.norm_state(x_center) <= R))
    throw PreconditionError("x_center must lie in the ball of radius R");
  const double dir_norm = model.norm_state(direction);
  if (!(dir_norm > 0.0)) throw PreconditionError("direction must be nonzero");

  RegularityReport report;
  report.model = model.name;
  report.ladder = ladder;
  RegularityConstants& c = report.constants;
  c.R = R;
  c.q = q;
  c.T = grid.T;
  c.safety = opts.safety;
  c.lattice_points = opts.lattice_points;

  try {
    const KEstimate k = estimate_K(model, R, q, grid, opts.lattice_points, run, opts.safety);
    c.K_estimate = k.raw;
    c.K = k.K;
    const TheoreticalConstant tc = theoretical_constant(c.K, q, grid.T);
    c.Kcal = tc.Kcal;
    c.c_local = tc.c_local;
    // E[max_{x,t} ||X^x(t)||] dominates max_{x,t} E||X^x(t)||.
    c.C_estimate = moment_bound_check(model, R, 1.0, grid, opts.lattice_points, run);
    c.C = opts.safety * c.C_estimate.mean;
    c.c_global = global_bound_constant(c.c_local, c.C, R, q);

    std::vector<double> y(d);
    std::vector<double> means;
    for (double h : ladder) {
      for (std::size_t i = 0; i < d; ++i)
        y[i] = x_center[i] + h * (direction[i] / dir_norm);
      const DistanceEstimate est = estimate_distance(model, y, x_center, grid, run);
      report.empirical.push_back(est.estimate);
      means.push_back(est.estimate.mean);
      const double bound = c.c_global * std::pow(std::abs(std::log(h)), -q);
      report.theoretical.push_back(bound);
      report.rung_pass.push_back(est.estimate.mean - 3.0 * est.estimate.std_error <= bound);
    }
    std::tie(report.fitted_q, report.fitted_c) = fit_log_modulus(ladder, means);
    report.pass = std::all_of(report.rung_pass.begin(), report.rung_pass.end(),
                              [](bool b) { return b; });
  } catch (const PreconditionError&) {
    throw;
  } catch (const Error& e) {
    report.complete = false;
    report.pass = false;
    report.failure = e.what();
  }
  return report;
}

}  // namespace sdereg
