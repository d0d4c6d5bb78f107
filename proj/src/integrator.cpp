#include "sdereg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "sdereg/error.hpp"

namespace sdereg {

namespace {

void check_dims(const DriftModel& model, std::size_t x0_size, std::size_t m) {
  if (x0_size != model.d)
    throw PreconditionError("initial value has wrong dimension");
  if (m != model.m) throw PreconditionError("path and model noise dimensions differ");
}

}  // namespace

void euler_solve_into(const DriftModel& model, std::span<const double> x0,
                      const TimeGrid& grid, std::span<const double> w,
                      std::span<double> states, EulerWorkspace& ws) {
  const std::size_t d = model.d;
  const std::size_t m = model.m;
  const double dt = grid.dt();
  auto& acc = ws.drift_sum;
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t i = 0; i < d; ++i) states[i] = x0[i];
  for (std::size_t n = 0; n < grid.N; ++n) {
    const auto x = states.subspan(n * d, d);
    model.drift(x, ws.mu);
    for (std::size_t i = 0; i < d; ++i) acc[i] += dt * ws.mu[i];
    model.sigma.apply(w.subspan((n + 1) * m, m), ws.sigma_w);
    auto next = states.subspan((n + 1) * d, d);
    for (std::size_t i = 0; i < d; ++i) {
      next[i] = (x0[i] + acc[i]) + ws.sigma_w[i];
      if (!std::isfinite(next[i]))
        throw DivergenceError("Euler scheme produced a non-finite state", n + 1);
    }
  }
}

SolutionPath euler_solve(const DriftModel& model, std::span<const double> x0,
                         const BrownianPath& path) {
  check_dims(model, x0.size(), path.m);
  SolutionPath sol{path.grid, model.d,
                   std::vector<double>(path.grid.nodes() * model.d),
                   std::vector<double>(x0.begin(), x0.end()), path.seed};
  EulerWorkspace ws(model.d);
  euler_solve_into(model, x0, path.grid, path.values, sol.states, ws);
  return sol;
}

std::vector<double> interpolate(const SolutionPath& sol, double t) {
  const TimeGrid& g = sol.grid;
  if (!(t >= 0.0 && t <= g.T))
    throw DomainError("interpolation time outside [0, T]");
  if (g.T == 0.0) {
    const auto s = sol.state(0);
    return {s.begin(), s.end()};
  }
  const double pos = t * static_cast<double>(g.N) / g.T;
  auto n = static_cast<std::size_t>(std::floor(pos));
  if (n >= g.N) n = g.N - 1;
  const double lambda = pos - static_cast<double>(n);
  const auto a = sol.state(n);
  const auto b = sol.state(n + 1);
  std::vector<double> out(sol.d);
  for (std::size_t i = 0; i < sol.d; ++i) {
    if (lambda == 0.0)
      out[i] = a[i];
    else if (lambda == 1.0)
      out[i] = b[i];
    else
      out[i] = (1.0 - lambda) * a[i] + lambda * b[i];
  }
  return out;
}

AdaptiveSolution solve_adaptive(const DriftModel& model,
                                std::span<const double> x0,
                                const BrownianPath& fine_path, double tol,
                                std::size_t base_steps) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const std::size_t fine_N = fine_path.grid.N;
  std::size_t base = base_steps;
  if (base == 0) {
    base = fine_N;
    while (base % 2 == 0 && base / 2 >= 8) base /= 2;
  }
  {
    std::size_t n = base;
    while (n < fine_N) n *= 2;
    if (n != fine_N)
      throw PreconditionError("fine grid must be a power of two times the base");
  }

  AdaptiveSolution result;
  std::optional<SolutionPath> previous;
  for (std::size_t n = base;; n *= 2) {
    std::optional<SolutionPath> current;
    try {
      current = euler_solve(model, x0, restrict(fine_path, n));
    } catch (const DivergenceError&) {
      if (n == fine_N) throw;
    }
    if (current && previous) {
      double dist = 0.0;
      for (std::size_t k = 0; k <= previous->grid.N; ++k)
        dist = std::max(dist, distance(model.norm_state.kind, previous->state(k),
                                       current->state(2 * k)));
      result.est_error = dist;
      if (dist <= tol) {
        result.solution = std::move(*current);
        result.N_used = n;
        result.converged = true;
        return result;
      }
    }
    if (n == fine_N) {
      result.solution = std::move(*current);
      result.N_used = n;
      result.converged = false;
      if (!previous) result.est_error = std::numeric_limits<double>::infinity();
      return result;
    }
    previous = std::move(current);
  }
}

double verify_integral_equation(const DriftModel& model, const SolutionPath& sol,
                                const BrownianPath& path) {
  if (!(sol.grid == path.grid))
    throw GridMismatchError("solution and path live on different grids");
  check_dims(model, sol.d, path.m);
  const std::size_t d = model.d;
  const double half_dt = 0.5 * sol.grid.dt();
  std::vector<double> quad(d, 0.0), mu_prev(d), mu_next(d), sw(d);
  model.drift(sol.state(0), mu_prev);
  double worst = 0.0;
  for (std::size_t n = 0; n <= sol.grid.N; ++n) {
    if (n > 0) {
      model.drift(sol.state(n), mu_next);
      for (std::size_t i = 0; i < d; ++i)
        quad[i] += half_dt * (mu_prev[i] + mu_next[i]);
      std::swap(mu_prev, mu_next);
    }
    model.sigma.apply(path.at(n), sw);
    const auto x = sol.state(n);
    std::vector<double> rhs(d);
    for (std::size_t i = 0; i < d; ++i)
      rhs[i] = (sol.initial[i] + quad[i]) + sw[i];
    worst = std::max(worst, distance(model.norm_state.kind, x, rhs));
  }
  return worst;
}

}  // namespace sdereg
