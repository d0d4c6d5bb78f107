#pragma once

// Coupled Monte Carlo estimation of sup_t E||X^x(t) - X^y(t)|| and the
// explicit constants of the logarithmic modulus
//
//   sup_t E||X^x(t) - X^y(t)|| <= c |ln ||x - y|| |^{-q},
//   Kcal     = 1 + 2^{4q+4} (|ln(2 + e^q)|^{4q+4} + T^{4q+4} K),
//   c_local  = 2 sqrt((1 + 4K) Kcal),
//   c_global = max{c_local, 2 C |ln(2R + 1)|^q},
//
// where K bounds the sup-moments E[sup (phi(X))^{4q+4}] and E[sup ||X||^2]
// over initial values in the ball of radius R + 1, and C bounds
// sup_t E||X^x(t)|| over the ball of radius R.
//
// Note the order of operations in the distance estimand: the mean over
// samples is taken per grid node first, and the sup over nodes (t = 0
// included) afterwards. E[sup_t ...] would be a different, larger quantity.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdereg/model.hpp"
#include "sdereg/parallel.hpp"
#include "sdereg/paths.hpp"

namespace sdereg {

struct DistanceEstimate {
  MCEstimate estimate;           // sup over nodes of the per-node mean
  std::size_t argmax_node = 0;   // node attaining the sup; std error from it
  std::size_t excluded = 0;      // diverged samples left out
  std::vector<double> node_means;
};

/// Samples whose Euler solve diverges are excluded; more than 1% exclusions
/// raise EstimatorError. Requires n_samples >= 2.
DistanceEstimate estimate_distance(const DriftModel& model, std::span<const double> x,
                                   std::span<const double> y, const TimeGrid& grid,
                                   const McRun& run);

struct KEstimate {
  MCEstimate phi_moment;     // E[max_{x,n} phi_state(X^x(t_n))^{4q+4}]
  MCEstimate square_moment;  // E[max_{x,n} ||X^x(t_n)||^2]
  MCEstimate raw;            // larger mean, with the larger std error
  double safety = 1.2;
  double K = 0.0;            // safety * raw.mean
  std::size_t lattice_size = 0;
  std::size_t excluded = 0;
};

inline constexpr double kDefaultSafety = 1.2;
inline constexpr std::size_t kDefaultLatticePoints = 9;

/// Maxima taken over ball_lattice(d, R + 1, x_grid_points) and grid nodes,
/// inside the expectation.
KEstimate estimate_K(const DriftModel& model, double R, double q, const TimeGrid& grid,
                     std::size_t x_grid_points, const McRun& run,
                     double safety = kDefaultSafety);

struct TheoreticalConstant {
  double Kcal = 0.0;
  double c_local = 0.0;
};

TheoreticalConstant theoretical_constant(double K, double q, double T);

double global_bound_constant(double c_local, double C, double R, double q);

/// E[max over ball_lattice(d, R, x_grid_points) and nodes of ||X^x(t_n)||^r].
MCEstimate moment_bound_check(const DriftModel& model, double R, double r,
                              const TimeGrid& grid, std::size_t x_grid_points,
                              const McRun& run);

/// F(y) = ln(1 + y).
double fg_F(double y);
/// G(y) = y / ln(1 + y), continuously extended by G(0) = 1.
double fg_G(double y);

struct FgDecompositionCheck {
  std::vector<double> node_lhs;  // mean ||Delta(t_n)||
  std::vector<double> node_rhs;  // sqrt(mean G(||Delta||)^2 * mean F(||Delta||)^2)
  double lhs = 0.0;              // values at the node with the largest lhs / rhs
  double rhs = 0.0;
  bool ok = true;
};

/// Empirical Cauchy-Schwarz step behind the local estimate, checked at every
/// node with relative slack 1e-9.
FgDecompositionCheck fg_decomposition_check(const DriftModel& model,
                                            std::span<const double> x,
                                            std::span<const double> y,
                                            const TimeGrid& grid, const McRun& run);

struct RegularityConstants {
  double R = 0.0;
  double q = 0.0;
  double T = 0.0;
  double K = 0.0;
  double Kcal = 0.0;
  double c_local = 0.0;
  double C = 0.0;
  double c_global = 0.0;
  double safety = kDefaultSafety;
  std::size_t lattice_points = kDefaultLatticePoints;
  MCEstimate K_estimate;  // before the safety factor
  MCEstimate C_estimate;  // before the safety factor
};

struct RegularityReport {
  std::string model;
  std::vector<double> ladder;
  std::vector<MCEstimate> empirical;
  std::vector<double> theoretical;
  std::vector<bool> rung_pass;
  double fitted_q = 0.0;  // NaN when fewer than two positive rungs
  double fitted_c = 0.0;
  bool pass = false;
  bool complete = true;
  std::string failure;  // set when complete == false
  RegularityConstants constants;
};

struct ModulusOptions {
  double safety = kDefaultSafety;
  std::size_t lattice_points = kDefaultLatticePoints;
};

/// For every h in the ladder, compares the coupled estimate at
/// (x_center + h u, x_center), u the normalised direction, with
/// c_global |ln h|^{-q}. A rung passes when mean - 3 std_error does not
/// exceed the bound. Estimator failures produce complete = false and
/// pass = false instead of an exception; invalid arguments still throw
/// PreconditionError.
RegularityReport verify_modulus(const DriftModel& model,
                                std::span<const double> x_center,
                                std::span<const double> direction,
                                const std::vector<double>& ladder, double q, double R,
                                const TimeGrid& grid, const McRun& run,
                                const ModulusOptions& opts = {});

/// Least-squares fit of ln(value) = ln c - q ln|ln h| over positive values.
/// Returns {q, c}, both NaN with fewer than two usable points.
std::pair<double, double> fit_log_modulus(const std::vector<double>& ladder,
                                          const std::vector<double>& values);

/// Default ladder 1e-1, 1e-2, ..., 1e-8.
std::vector<double> default_ladder();

}  // namespace sdereg
