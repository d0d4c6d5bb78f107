#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdereg/integrator.hpp"
#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"

namespace sdereg {

/// Derivative of the discrete flow with respect to the initial value, along
/// a computed solution. Either its action on one direction h (columns == 1)
/// or the full d x d Jacobian (columns == d, stored column-major per node).
struct VariationalPath {
  TimeGrid grid;
  std::size_t d = 1;
  std::size_t columns = 1;
  std::vector<double> values;            // (N + 1) x d x columns
  std::optional<std::vector<double>> direction;  // empty for the full flow

  std::span<const double> column(std::size_t n, std::size_t j = 0) const {
    return {values.data() + (n * columns + j) * d, d};
  }
};

/// D_{n+1} h = D_n h + dt mu'(X_n) D_n h, D_0 h = h. Uses the same frozen
/// states as the Euler solve, so it is the exact derivative of the discrete
/// flow. Throws DivergenceError on a non-finite entry.
VariationalPath variational_solve(const DriftModel& model, const SolutionPath& sol,
                                  std::span<const double> h);

/// Full Jacobian flow, advanced column by column at every node.
VariationalPath variational_flow(const DriftModel& model, const SolutionPath& sol);

/// max_n || (X^{x + eps h}(t_n) - X^x(t_n)) / eps - D(t_n) h || with both
/// solutions driven by `path`.
double finite_difference_check(const DriftModel& model, std::span<const double> x,
                               std::span<const double> h, const BrownianPath& path,
                               double eps);

struct GrowthBoundCheck {
  bool ok = true;
  double margin = 0.0;  // min over nodes and columns of rhs - lhs
};

/// Checks ||D(t_n) h|| <= ||h|| exp(t_n max_{k<=n} phi_state(X_k)) at every
/// node, with relative slack 1e-9.
GrowthBoundCheck growth_bound_check(const DriftModel& model, const SolutionPath& sol,
                                    const VariationalPath& var);

struct PathwiseDistanceBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
  std::size_t u_grid_used = 0;
};

/// lhs = max_n ||X^x(t_n) - X^y(t_n)||,
/// rhs = max_u ||x - y|| exp(T max_n phi_state(X^{(1-u) y + u x}(t_n)))
/// over u_grid equispaced u in [0, 1]. A failure is re-examined once on the
/// bisected u grid (2 (u_grid - 1) + 1 points) before it is reported.
PathwiseDistanceBound pathwise_distance_bound(const DriftModel& model,
                                              std::span<const double> x,
                                              std::span<const double> y,
                                              const BrownianPath& path,
                                              std::size_t u_grid);

}  // namespace sdereg
