#include "sdereg/variational.hpp"

#include <algorithm>
#include <cmath>

#include "sdereg/error.hpp"

namespace sdereg {

namespace {

VariationalPath advance(const DriftModel& model, const SolutionPath& sol,
                        std::span<const double> initial, std::size_t columns) {
  const std::size_t d = model.d;
  if (sol.d != d) throw PreconditionError("solution does not match the model");
  VariationalPath var;
  var.grid = sol.grid;
  var.d = d;
  var.columns = columns;
  var.values.assign(sol.grid.nodes() * d * columns, 0.0);
  std::copy(initial.begin(), initial.end(), var.values.begin());

  const double dt = sol.grid.dt();
  std::vector<double> jac(d * d);
  const std::size_t width = d * columns;
  for (std::size_t n = 0; n < sol.grid.N; ++n) {
    model.jacobian(sol.state(n), jac);
    const double* cur = var.values.data() + n * width;
    double* next = var.values.data() + (n + 1) * width;
    for (std::size_t c = 0; c < columns; ++c) {
      const double* v = cur + c * d;
      double* out = next + c * d;
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += jac[i * d + j] * v[j];
        out[i] = v[i] + dt * s;
        if (!std::isfinite(out[i]))
          throw DivergenceError("variational recursion produced a non-finite entry",
                                n + 1);
      }
    }
  }
  return var;
}

}  // namespace

VariationalPath variational_solve(const DriftModel& model, const SolutionPath& sol,
                                  std::span<const double> h) {
  if (h.size() != model.d) throw PreconditionError("direction has wrong dimension");
  VariationalPath var = advance(model, sol, h, 1);
  var.direction = std::vector<double>(h.begin(), h.end());
  return var;
}

VariationalPath variational_flow(const DriftModel& model, const SolutionPath& sol) {
  const Matrix eye = Matrix::identity(model.d);
  return advance(model, sol, eye.data, model.d);
}

double finite_difference_check(const DriftModel& model, std::span<const double> x,
                               std::span<const double> h, const BrownianPath& path,
                               double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const std::size_t d = model.d;
  std::vector<double> shifted(d);
  for (std::size_t i = 0; i < d; ++i) shifted[i] = x[i] + eps * h[i];
  const SolutionPath base = euler_solve(model, x, path);
  const SolutionPath bumped = euler_solve(model, shifted, path);
  const VariationalPath var = variational_solve(model, base, h);
  std::vector<double> diff(d);
  double worst = 0.0;
  for (std::size_t n = 0; n < path.grid.nodes(); ++n) {
    const auto a = base.state(n);
    const auto b = bumped.state(n);
    const auto dh = var.column(n);
    for (std::size_t i = 0; i < d; ++i) diff[i] = (b[i] - a[i]) / eps - dh[i];
    worst = std::max(worst, model.norm_state(diff));
  }
  return worst;
}

GrowthBoundCheck growth_bound_check(const DriftModel& model, const SolutionPath& sol,
                                    const VariationalPath& var) {
  if (!(sol.grid == var.grid) || sol.d != var.d)
    throw GridMismatchError("variational path does not match the solution");
  GrowthBoundCheck check;
  bool first = true;
  std::vector<double> unit(var.d, 0.0);
  for (std::size_t c = 0; c < var.columns; ++c) {
    // The bound is on the input direction, not on the stored D_0.
    double h_norm;
    if (var.direction) {
      h_norm = model.norm_state(*var.direction);
    } else {
      std::fill(unit.begin(), unit.end(), 0.0);
      unit[c] = 1.0;
      h_norm = model.norm_state(unit);
    }
    double sup_phi = 0.0;
    for (std::size_t n = 0; n < sol.grid.nodes(); ++n) {
      sup_phi = std::max(sup_phi, model.phi_state(sol.state(n)));
      const double lhs = model.norm_state(var.column(n, c));
      const double rhs = h_norm * std::exp(sol.grid.time(n) * sup_phi);
      const double gap = rhs - lhs;
      if (first || gap < check.margin) check.margin = gap;
      first = false;
      if (!(lhs <= rhs * (1.0 + 1e-9))) check.ok = false;
    }
  }
  return check;
}

namespace {

PathwiseDistanceBound distance_bound_once(const DriftModel& model,
                                          std::span<const double> x,
                                          std::span<const double> y,
                                          const BrownianPath& path,
                                          std::size_t u_grid) {
  const std::size_t d = model.d;
  PathwiseDistanceBound out;
  out.u_grid_used = u_grid;
  const SolutionPath sx = euler_solve(model, x, path);
  const SolutionPath sy = euler_solve(model, y, path);
  for (std::size_t n = 0; n < path.grid.nodes(); ++n)
    out.lhs = std::max(out.lhs, distance(model.norm_state.kind, sx.state(n), sy.state(n)));

  std::vector<double> xy(d);
  for (std::size_t i = 0; i < d; ++i) xy[i] = x[i] - y[i];
  const double dist0 = model.norm_state(xy);
  std::vector<double> start(d);
  for (std::size_t k = 0; k < u_grid; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(u_grid - 1);
    const SolutionPath* sol = nullptr;
    SolutionPath tmp;
    if (k == 0) {
      sol = &sy;
    } else if (k + 1 == u_grid) {
      sol = &sx;
    } else {
      for (std::size_t i = 0; i < d; ++i) start[i] = (1.0 - u) * y[i] + u * x[i];
      tmp = euler_solve(model, start, path);
      sol = &tmp;
    }
    double sup_phi = 0.0;
    for (std::size_t n = 0; n < path.grid.nodes(); ++n)
      sup_phi = std::max(sup_phi, model.phi_state(sol->state(n)));
    out.rhs = std::max(out.rhs, dist0 * std::exp(path.grid.T * sup_phi));
  }
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

}  // namespace

PathwiseDistanceBound pathwise_distance_bound(const DriftModel& model,
                                              std::span<const double> x,
                                              std::span<const double> y,
                                              const BrownianPath& path,
                                              std::size_t u_grid) {
  if (u_grid < 2) throw PreconditionError("u_grid must be at least 2");
  if (x.size() != model.d || y.size() != model.d)
    throw PreconditionError("initial values have wrong dimension");
  PathwiseDistanceBound out = distance_bound_once(model, x, y, path, u_grid);
  if (!out.ok) out = distance_bound_once(model, x, y, path, 2 * (u_grid - 1) + 1);
  return out;
}

}  // namespace sdereg
