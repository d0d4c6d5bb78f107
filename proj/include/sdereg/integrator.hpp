#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"

namespace sdereg {

/// Grid values of the solution of X(t) = x + int_0^t mu(X) ds + sigma W(t).
struct SolutionPath {
  TimeGrid grid;
  std::size_t d = 1;
  std::vector<double> states;  // (N + 1) x d, row-major
  std::vector<double> initial;
  std::uint64_t path_seed = 0;

  std::span<const double> state(std::size_t n) const {
    return {states.data() + n * d, d};
  }
  std::span<double> state(std::size_t n) { return {states.data() + n * d, d}; }
};

/// Reusable buffers for the allocation-free solver used in Monte Carlo loops.
struct EulerWorkspace {
  std::vector<double> drift_sum;
  std::vector<double> mu;
  std::vector<double> sigma_w;

  explicit EulerWorkspace(std::size_t d = 1)
      : drift_sum(d), mu(d), sigma_w(d) {}
};

/// Euler recursion X_{n+1} = X_n + dt mu(X_n) + sigma (W_{n+1} - W_n),
/// X_0 = x0. The state is carried as X_n = (x0 + A_n) + sigma W_n with the
/// accumulated drift A_{n+1} = A_n + dt mu(X_n), which is the same
/// recursion and reproduces x0 + sigma W exactly when mu vanishes.
/// Throws DivergenceError at the first non-finite state.
SolutionPath euler_solve(const DriftModel& model, std::span<const double> x0,
                         const BrownianPath& path);

/// In-place variant: `w` holds (N + 1) x m path values, `states` receives
/// (N + 1) x d entries.
void euler_solve_into(const DriftModel& model, std::span<const double> x0,
                      const TimeGrid& grid, std::span<const double> w,
                      std::span<double> states, EulerWorkspace& ws);

/// Piecewise-linear value at time t; exact at nodes. Throws DomainError for
/// t outside [0, T].
std::vector<double> interpolate(const SolutionPath& sol, double t);

struct AdaptiveSolution {
  SolutionPath solution;
  std::size_t N_used = 0;
  double est_error = 0.0;
  bool converged = false;
};

/// Solves on base, 2 base, 4 base, ... steps (each on the restriction of
/// fine_path) until two consecutive resolutions agree at the shared nodes to
/// within tol, or the fine grid is reached (converged = false). Divergence on
/// a coarse level only forces further refinement. base_steps == 0 picks the
/// smallest power-of-two divisor of the fine grid that is at least 8.
AdaptiveSolution solve_adaptive(const DriftModel& model,
                                std::span<const double> x0,
                                const BrownianPath& fine_path, double tol,
                                std::size_t base_steps = 0);

/// max_n || X_n - ((x0 + Q_n) + sigma W(t_n)) || with Q_n the trapezoidal
/// integral of mu(X) up to t_n. Throws GridMismatchError if sol and path
/// live on different grids.
double verify_integral_equation(const DriftModel& model, const SolutionPath& sol,
                                const BrownianPath& path);

}  // namespace sdereg
