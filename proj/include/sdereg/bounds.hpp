#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"

namespace sdereg {

/// (alpha (1 + beta)^n, |alpha| e^{beta n}): the two sides of the discrete
/// Gronwall conclusion. Requires beta >= 0.
std::pair<double, double> discrete_gronwall_bound(double alpha, double beta,
                                                  std::size_t n);

/// Sequence f_0, f_1, ... satisfying f_n <= alpha + beta sum_{k<n} f_k.
/// Entries may be +infinity.
struct GronwallInput {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> f;
};

struct GronwallCheck {
  bool hypothesis_holds = false;
  bool bound_holds = false;  // only evaluated when the hypothesis holds
};

/// Both comparisons use relative slack 1e-12.
GronwallCheck discrete_gronwall_check(const GronwallInput& input);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
};

/// |sum a_i|^beta <= k^{max(0, beta - 1)} sum |a_i|^beta for k = a.size().
InequalityCheck power_sum_bound(double beta, std::span<const double> a);

/// a^2 / |ln a|^{2q} <= b^2 / |ln b|^{2q} for e^q <= a <= b. Throws
/// PreconditionError outside that range.
bool log_monotone_check(double q, double a, double b);

/// Same comparison at e^q a and e^q b, for 1 <= a <= b.
bool log_monotone_check_shifted(double q, double a, double b);

struct AprioriBound {
  double bound = 0.0;
  double sup_solution = 0.0;
  bool ok = true;
};

/// bound = V(xi) exp(T max_n phi(W(t_n))) + max_n ||sigma W(t_n)||,
/// sup_solution = max_n ||X^xi(t_n)|| from the Euler solve on the same path,
/// ok = sup_solution <= bound (1 + 1e-6). The model must satisfy the
/// Lyapunov condition; check_lyapunov is the caller's tool for that.
AprioriBound apriori_bound(const DriftModel& model, std::span<const double> xi,
                           const BrownianPath& path);

}  // namespace sdereg
