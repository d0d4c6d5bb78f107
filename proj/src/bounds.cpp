#include "sdereg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdereg/error.hpp"
#include "sdereg/integrator.hpp"

namespace sdereg {

namespace {

constexpr double kRelSlack = 1e-12;

bool le_slack(double lhs, double rhs) {
  if (lhs <= rhs) return true;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  return lhs - rhs <= kRelSlack * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

std::pair<double, double> discrete_gronwall_bound(double alpha, double beta,
                                                  std::size_t n) {
  if (!(beta >= 0.0)) throw PreconditionError("beta must be nonnegative");
  const double dn = static_cast<double>(n);
  return {alpha * std::pow(1.0 + beta, dn), std::abs(alpha) * std::exp(beta * dn)};
}

GronwallCheck discrete_gronwall_check(const GronwallInput& input) {
  if (!(input.beta >= 0.0)) throw PreconditionError("beta must be nonnegative");
  GronwallCheck check;
  double partial = 0.0;  // sum_{k<n} f_k, possibly +inf
  for (double fn : input.f) {
    const double tail = input.beta == 0.0 ? 0.0 : input.beta * partial;
    const double rhs = input.alpha + tail;
    if (std::isnan(fn) || !le_slack(fn, rhs)) return check;
    partial += fn;
  }
  check.hypothesis_holds = true;
  check.bound_holds = true;
  for (std::size_t n = 0; n < input.f.size(); ++n) {
    const auto [first, second] = discrete_gronwall_bound(input.alpha, input.beta, n);
    if (!le_slack(input.f[n], first) || !le_slack(first, second))
      check.bound_holds = false;
  }
  return check;
}

InequalityCheck power_sum_bound(double beta, std::span<const double> a) {
  if (!(beta >= 0.0)) throw PreconditionError("beta must be nonnegative");
  double sum = 0.0, pow_sum = 0.0;
  for (double v : a) {
    sum += v;
    pow_sum += std::pow(std::abs(v), beta);
  }
  InequalityCheck out;
  out.lhs = std::pow(std::abs(sum), beta);
  out.rhs = std::pow(static_cast<double>(a.size()), std::max(0.0, beta - 1.0)) * pow_sum;
  out.ok = out.lhs <= out.rhs * (1.0 + kRelSlack);
  return out;
}

namespace {

// 2 ln a - 2q ln ln a, the logarithm of a^2 / |ln a|^{2q} for a > 1.
double log_ratio(double q, double log_a) { return 2.0 * log_a - 2.0 * q * std::log(log_a); }

bool log_monotone_logs(double q, double log_a, double log_b) {
  if (log_a == log_b) return true;
  // Compared in the log domain; increasing on ln a >= q.
  return le_slack(log_ratio(q, log_a), log_ratio(q, log_b));
}

}  // namespace

bool log_monotone_check(double q, double a, double b) {
  if (!(q > 0.0)) throw PreconditionError("q must be positive");
  if (!(a >= std::exp(q) && a <= b))
    throw PreconditionError("log monotonicity requires e^q <= a <= b");
  return log_monotone_logs(q, std::max(std::log(a), q), std::log(b));
}

bool log_monotone_check_shifted(double q, double a, double b) {
  if (!(q >= 0.0)) throw PreconditionError("q must be nonnegative");
  if (!(a >= 1.0 && a <= b))
    throw PreconditionError("shifted log monotonicity requires 1 <= a <= b");
  if (q == 0.0) return a <= b;
  // ln(e^q a) = q + ln a, computed without forming e^q a.
  return log_monotone_logs(q, q + std::log(a), q + std::log(b));
}

AprioriBound apriori_bound(const DriftModel& model, std::span<const double> xi,
                           const BrownianPath& path) {
  const PathSupStats stats = path_sup_stats(path, model);
  AprioriBound out;
  out.bound = model.lyapunov.value(xi) * std::exp(path.grid.T * stats.sup_phi_w) +
              stats.sup_sigma_w;
  const SolutionPath sol = euler_solve(model, xi, path);
  for (std::size_t n = 0; n < sol.grid.nodes(); ++n)
    out.sup_solution = std::max(out.sup_solution, model.norm_state(sol.state(n)));
  out.ok = out.sup_solution <= out.bound * (1.0 + 1e-6);
  return out;
}

}  // namespace sdereg
