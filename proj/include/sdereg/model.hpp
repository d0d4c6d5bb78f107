#pragma once

// SDE model dX = mu(X) dt + sigma dW with constant sigma, a Lyapunov
// certificate, a small catalog of worked examples, and sampled checkers for
// the two structural hypotheses:
//
//   derivative growth   ||mu'(x) h|| <= kappa (1 + ||x||^kappa) ||h||
//   Lyapunov condition  V'(x) mu(x + sigma z) <= phi(z) V(x),  V(x) >= ||x||
//
// with phi(z) = phi_kappa (1 + |||z|||^phi_alpha) and phi_alpha < 2.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdereg/matrix.hpp"
#include "sdereg/norm.hpp"

namespace sdereg {

using VectorField =
    std::function<void(std::span<const double> x, std::span<double> out)>;
using ScalarField = std::function<double(std::span<const double> x)>;

struct LyapunovSpec {
  ScalarField value;
  VectorField gradient;
  double phi_kappa = 0.0;
  double phi_alpha = 0.0;

  /// phi evaluated at a noise vector of norm `noise_norm`.
  double phi(double noise_norm) const;
};

struct DriftModel {
  std::string name;
  std::size_t d = 1;
  std::size_t m = 1;
  VectorField drift;
  VectorField jacobian;  // row-major d x d
  Matrix sigma;          // d x m
  double kappa = 0.0;
  LyapunovSpec lyapunov;
  NormSpec norm_state;
  NormSpec norm_noise;

  /// phi(z) = phi_kappa (1 + |||z|||^phi_alpha) on the noise space.
  double phi_noise(std::span<const double> z) const;
  /// kappa (1 + ||x||^kappa): the pointwise bound on the operator norm of
  /// mu'(x), which also drives the variational growth estimates.
  double phi_state(std::span<const double> x) const;

  /// Throws PreconditionError on inconsistent dimensions or parameters.
  void validate() const;
};

/// Adapts a scalar function to a 1-d vector field.
VectorField scalar_field(std::function<double(double)> f);

struct CatalogOptions {
  std::size_t dim = 1;  // only zero, ou_nd and bounded_tanh accept dim > 1
  NormKind state_norm = NormKind::euclidean;
  NormKind noise_norm = NormKind::euclidean;
  std::optional<double> kappa;  // replaces the catalog growth constant
};

/// Catalog of worked models; each entry documents why both hypotheses hold.
/// Throws CatalogError for unknown names.
DriftModel catalog_model(std::string_view name, const CatalogOptions& opts = {});

std::vector<std::string> catalog_names();

using Point = std::vector<double>;
using PointSet = std::vector<Point>;

/// per_axis^dim lattice points of [lo, hi]^dim; per_axis == 1 gives the
/// midpoint.
PointSet uniform_grid(std::size_t dim, double lo, double hi,
                      std::size_t per_axis);
PointSet random_points(std::size_t dim, double lo, double hi,
                       std::size_t count, std::uint64_t seed);
/// Lattice points of [-radius, radius]^dim inside the closed norm ball; the
/// origin if none are.
PointSet ball_lattice(std::size_t dim, double radius, std::size_t per_axis,
                      const NormSpec& norm);

struct Violation {
  Point x;
  Point z;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConditionReport {
  std::size_t checked_points = 0;
  std::vector<Violation> violations;  // at most kMaxRecorded entries
  std::size_t violation_count = 0;
  double max_ratio = 0.0;
  double slack = 1e-9;

  static constexpr std::size_t kMaxRecorded = 64;

  bool ok() const { return violation_count == 0; }
};

inline constexpr double kDefaultSlack = 1e-9;

/// lhs = ||mu'(x) h||, rhs = kappa (1 + ||x||^kappa) ||h|| over random unit
/// directions h (per point), recorded as (x, h, lhs, rhs).
ConditionReport check_derivative_growth(const DriftModel& model,
                                        const PointSet& points,
                                        std::size_t directions_per_point,
                                        std::uint64_t seed = 0,
                                        double slack = kDefaultSlack);

/// lhs = <V'(x), mu(x + sigma z)>, rhs = phi(z) V(x) over all pairs.
ConditionReport check_lyapunov(const DriftModel& model, const PointSet& x_points,
                               const PointSet& z_points,
                               double slack = kDefaultSlack);

/// lhs = ||x||, rhs = V(x).
ConditionReport check_lyapunov_dominates_norm(const DriftModel& model,
                                              const PointSet& x_points,
                                              double slack = kDefaultSlack);

struct ConsistencyReport {
  std::size_t checked_points = 0;
  double max_rel_error = 0.0;
  Point worst_point;
};

/// Central differences with step 1e-6 (1 + ||x||); the error of each entry
/// is measured relative to max(1, |exact entry|).
ConsistencyReport check_jacobian(const DriftModel& model, const PointSet& points);
ConsistencyReport check_lyapunov_gradient(const DriftModel& model,
                                          const PointSet& points);

}  // namespace sdereg
