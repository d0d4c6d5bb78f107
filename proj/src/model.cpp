#include "sdereg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdereg/error.hpp"
#include "sdereg/rng.hpp"

namespace sdereg {

double LyapunovSpec::phi(double noise_norm) const {
  return phi_kappa * (1.0 + std::pow(noise_norm, phi_alpha));
}

double DriftModel::phi_noise(std::span<const double> z) const {
  return lyapunov.phi(norm_noise(z));
}

double DriftModel::phi_state(std::span<const double> x) const {
  return kappa * (1.0 + std::pow(norm_state(x), kappa));
}

void DriftModel::validate() const {
  if (d == 0 || m == 0) throw PreconditionError("model dimensions must be positive");
  if (sigma.rows != d || sigma.cols != m)
    throw PreconditionError("sigma must be a d x m matrix");
  if (!drift || !jacobian) throw PreconditionError("model needs drift and jacobian");
  if (!(kappa >= 0.0)) throw PreconditionError("kappa must be nonnegative");
  if (!(lyapunov.phi_kappa >= 0.0))
    throw PreconditionError("phi_kappa must be nonnegative");
  if (!(lyapunov.phi_alpha >= 0.0 && lyapunov.phi_alpha < 2.0))
    throw PreconditionError("phi_alpha must lie in [0, 2)");
}

VectorField scalar_field(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> x, std::span<double> out) {
    out[0] = f(x[0]);
  };
}

namespace {

// sup over z of ||z||_2 / |||z||| for the given norm on R^k.
double euclid_over(NormKind kind, std::size_t k) {
  return kind == NormKind::max ? std::sqrt(static_cast<double>(k)) : 1.0;
}

// V(x) = sqrt(1 + s^2 ||x||_2^2) with s chosen so that V(x) >= ||x|| in the
// state norm: ||x||_1 <= sqrt(d) ||x||_2 and ||x||_max <= ||x||_2.
LyapunovSpec smooth_radial(std::size_t d, NormKind state_norm, double phi_kappa,
                           double phi_alpha) {
  const double s2 = state_norm == NormKind::one ? static_cast<double>(d) : 1.0;
  LyapunovSpec l;
  l.value = [s2](std::span<const double> x) {
    double r = 0.0;
    for (double v : x) r += v * v;
    return std::sqrt(1.0 + s2 * r);
  };
  l.gradient = [s2](std::span<const double> x, std::span<double> out) {
    double r = 0.0;
    for (double v : x) r += v * v;
    const double inv = s2 / std::sqrt(1.0 + s2 * r);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = inv * x[i];
  };
  l.phi_kappa = phi_kappa;
  l.phi_alpha = phi_alpha;
  return l;
}

void require_scalar(std::string_view name, std::size_t dim) {
  if (dim != 1)
    throw PreconditionError("catalog model '" + std::string(name) +
                            "' is one-dimensional");
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"zero", "linear1d", "ou_nd", "oscillatory1d", "cubic_deterministic",
          "bounded_tanh"};
}

DriftModel catalog_model(std::string_view name, const CatalogOptions& opts) {
  const std::size_t d = opts.dim;
  if (d == 0) throw PreconditionError("dimension must be positive");
  const double s = opts.state_norm == NormKind::one ? std::sqrt(double(d)) : 1.0;

  DriftModel model;
  model.name = std::string(name);
  model.d = d;
  model.m = d;
  model.norm_state = {opts.state_norm};
  model.norm_noise = {opts.noise_norm};
  model.sigma = Matrix::identity(d);

  if (name == "zero") {
    // mu = 0: both hypotheses hold with kappa = 0 and phi = 0.
    model.drift = [](std::span<const double>, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
    };
    model.jacobian = [](std::span<const double>, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
    };
    model.kappa = 0.0;
    model.lyapunov = smooth_radial(d, opts.state_norm, 0.0, 0.0);
  } else if (name == "linear1d") {
    // mu(x) = -x, |mu'| = 1 <= 1 + |x|.
    // V'(x) mu(x + z) = -x (x + z) / V(x) <= |x||z| / V(x) <= |z|
    //   <= (1 + |z|) V(x).
    require_scalar(name, d);
    model.drift = scalar_field([](double x) { return -x; });
    model.jacobian = scalar_field([](double) { return -1.0; });
    model.kappa = 1.0;
    model.lyapunov = smooth_radial(1, opts.state_norm, 1.0, 1.0);
  } else if (name == "ou_nd") {
    // mu(x) = -x in R^d; mu' = -I has operator norm 1 in every norm.
    // V'(x) mu(x + z) = -s^2 <x, x + z> / V <= s^2 ||x||_2 ||z||_2 / V
    //   <= s t |||z||| with t = sup ||z||_2 / |||z|||.
    model.drift = [](std::span<const double> x, std::span<double> out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
    };
    model.jacobian = [d](std::span<const double>, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) out[i * d + i] = -1.0;
    };
    model.kappa = 1.0;
    model.lyapunov = smooth_radial(d, opts.state_norm,
                                   s * euclid_over(opts.noise_norm, d), 1.0);
  } else if (name == "oscillatory1d") {
    // mu(x) = -x + sin(x^2), mu'(x) = -1 + 2x cos(x^2), so
    // |mu'(x)| <= 1 + 2|x| <= 2 (1 + x^2).
    // V'(x) mu(x + z) = x (-(x + z) + sin((x + z)^2)) / V(x)
    //   <= |x| (|z| + 1) / V(x) <= 1 + |z| <= 2 (1 + |z|) V(x).
    require_scalar(name, d);
    model.drift = scalar_field([](double x) { return -x + std::sin(x * x); });
    model.jacobian =
        scalar_field([](double x) { return -1.0 + 2.0 * x * std::cos(x * x); });
    model.kappa = 2.0;
    model.lyapunov = smooth_radial(1, opts.state_norm, 2.0, 1.0);
  } else if (name == "cubic_deterministic") {
    // mu(x) = -x^3 with sigma = 0. |mu'| = 3x^2 <= 3 (1 + |x|^3).
    // V'(x) mu(x) = -x^4 / V(x) <= 0 <= 1 * V(x); phi = 0.5 (1 + |z|^0) = 1.
    require_scalar(name, d);
    model.drift = scalar_field([](double x) { return -x * x * x; });
    model.jacobian = scalar_field([](double x) { return -3.0 * x * x; });
    model.sigma = Matrix(1, 1, 0.0);
    model.kappa = 3.0;
    model.lyapunov = smooth_radial(1, opts.state_norm, 0.5, 0.0);
  } else if (name == "bounded_tanh") {
    // mu_i(x) = tanh(x_i). mu' = diag(1 - tanh^2) has operator norm <= 1.
    // V'(x) mu(x + z) = s^2 <x, tanh(x + z)> / V <= s^2 ||x||_2 sqrt(d) / V
    //   <= s sqrt(d) <= s sqrt(d) (1 + |||z|||) V(x).
    model.drift = [](std::span<const double> x, std::span<double> out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::tanh(x[i]);
    };
    model.jacobian = [d](std::span<const double> x, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        const double t = std::tanh(x[i]);
        out[i * d + i] = 1.0 - t * t;
      }
    };
    model.kappa = 1.0;
    model.lyapunov = smooth_radial(d, opts.state_norm, s * std::sqrt(double(d)), 1.0);
  } else {
    throw CatalogError("unknown catalog model '" + std::string(name) + "'");
  }

  if (opts.kappa) model.kappa = *opts.kappa;
  model.validate();
  return model;
}

PointSet uniform_grid(std::size_t dim, double lo, double hi,
                      std::size_t per_axis) {
  if (dim == 0 || per_axis == 0) return {};
  std::vector<double> axis(per_axis);
  for (std::size_t i = 0; i < per_axis; ++i)
    axis[i] = per_axis == 1 ? 0.5 * (lo + hi)
                            : lo + (hi - lo) * double(i) / double(per_axis - 1);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= per_axis;
  PointSet out;
  out.reserve(total);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Point p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = axis[idx[k]];
    out.push_back(std::move(p));
    for (std::size_t k = 0; k < dim; ++k) {
      if (++idx[k] < per_axis) break;
      idx[k] = 0;
    }
  }
  return out;
}

PointSet random_points(std::size_t dim, double lo, double hi, std::size_t count,
                       std::uint64_t seed) {
  RandomStream rng(seed, 0);
  PointSet out(count, Point(dim));
  for (auto& p : out)
    for (double& v : p) v = lo + (hi - lo) * rng.uniform();
  return out;
}

PointSet ball_lattice(std::size_t dim, double radius, std::size_t per_axis,
                      const NormSpec& norm) {
  PointSet out;
  if (radius == 0.0) return {Point(dim, 0.0)};
  for (auto& p : uniform_grid(dim, -radius, radius, per_axis))
    if (norm(p) <= radius * (1.0 + 1e-12)) out.push_back(std::move(p));
  if (out.empty()) out.push_back(Point(dim, 0.0));
  return out;
}

namespace {

void require_finite(std::span<const double> v, const char* what,
                    std::span<const double> at) {
  for (double x : v)
    if (!std::isfinite(x))
      throw EvaluationError(std::string("non-finite ") + what,
                            Point(at.begin(), at.end()));
}

void record(ConditionReport& report, std::span<const double> x,
            std::span<const double> z, double lhs, double rhs) {
  ++report.checked_points;
  double ratio;
  if (rhs > 0.0)
    ratio = lhs / rhs;
  else
    ratio = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (report.checked_points == 1 || ratio > report.max_ratio)
    report.max_ratio = ratio;
  if (lhs > rhs * (1.0 + report.slack)) {
    ++report.violation_count;
    if (report.violations.size() < ConditionReport::kMaxRecorded)
      report.violations.push_back(
          {Point(x.begin(), x.end()), Point(z.begin(), z.end()), lhs, rhs});
  }
}

}  // namespace

ConditionReport check_derivative_growth(const DriftModel& model,
                                        const PointSet& points,
                                        std::size_t directions_per_point,
                                        std::uint64_t seed, double slack) {
  if (points.empty() || directions_per_point == 0)
    throw PreconditionError("derivative growth check needs points and directions");
  const std::size_t d = model.d;
  ConditionReport report;
  report.slack = slack;
  RandomStream rng(seed, 0);
  std::vector<double> jac(d * d), h(d), jh(d);
  for (const auto& x : points) {
    model.jacobian(x, jac);
    require_finite(jac, "jacobian value", x);
    const double bound = model.phi_state(x);
    for (std::size_t k = 0; k < directions_per_point; ++k) {
      double hn = 0.0;
      while (hn == 0.0) {
        for (double& v : h) v = rng.gaussian();
        hn = model.norm_state(h);
      }
      for (double& v : h) v /= hn;
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += jac[i * d + j] * h[j];
        jh[i] = s;
      }
      record(report, x, h, model.norm_state(jh), bound * model.norm_state(h));
    }
  }
  return report;
}

ConditionReport check_lyapunov(const DriftModel& model, const PointSet& x_points,
                               const PointSet& z_points, double slack) {
  if (x_points.empty() || z_points.empty())
    throw PreconditionError("Lyapunov check needs x and z samples");
  const std::size_t d = model.d;
  ConditionReport report;
  report.slack = slack;
  std::vector<double> grad(d), shifted(d), sz(d), mu(d);
  std::vector<double> phis;
  phis.reserve(z_points.size());
  for (const auto& z : z_points) phis.push_back(model.phi_noise(z));
  for (const auto& x : x_points) {
    const double v = model.lyapunov.value(x);
    if (!std::isfinite(v)) throw EvaluationError("non-finite V", x);
    model.lyapunov.gradient(x, grad);
    require_finite(grad, "V gradient", x);
    for (std::size_t k = 0; k < z_points.size(); ++k) {
      const auto& z = z_points[k];
      model.sigma.apply(z, sz);
      for (std::size_t i = 0; i < d; ++i) shifted[i] = x[i] + sz[i];
      model.drift(shifted, mu);
      require_finite(mu, "drift value", shifted);
      double lhs = 0.0;
      for (std::size_t i = 0; i < d; ++i) lhs += grad[i] * mu[i];
      record(report, x, z, lhs, phis[k] * v);
    }
  }
  return report;
}

ConditionReport check_lyapunov_dominates_norm(const DriftModel& model,
                                              const PointSet& x_points,
                                              double slack) {
  ConditionReport report;
  report.slack = slack;
  for (const auto& x : x_points) {
    const double v = model.lyapunov.value(x);
    if (!std::isfinite(v) || v < 0.0) throw EvaluationError("invalid V value", x);
    record(report, x, {}, model.norm_state(x), v);
  }
  return report;
}

namespace {

template <class Exact, class Eval>
ConsistencyReport fd_consistency(const PointSet& points, std::size_t in_dim,
                                 std::size_t out_dim, Exact exact, Eval eval) {
  ConsistencyReport report;
  std::vector<double> want(out_dim * in_dim), xp, fp(out_dim), fm(out_dim);
  for (const auto& x : points) {
    exact(x, std::span<double>(want));
    double xn = 0.0;
    for (double v : x) xn += v * v;
    const double step = 1e-6 * (1.0 + std::sqrt(xn));
    for (std::size_t j = 0; j < in_dim; ++j) {
      xp = x;
      xp[j] = x[j] + step;
      eval(xp, std::span<double>(fp));
      xp[j] = x[j] - step;
      eval(xp, std::span<double>(fm));
      for (std::size_t i = 0; i < out_dim; ++i) {
        const double fd = (fp[i] - fm[i]) / (2.0 * step);
        const double ref = want[i * in_dim + j];
        const double err = std::abs(fd - ref) / std::max(1.0, std::abs(ref));
        if (!(err <= report.max_rel_error)) {
          report.max_rel_error = err;
          report.worst_point = x;
        }
      }
    }
    ++report.checked_points;
  }
  return report;
}

}  // namespace

ConsistencyReport check_jacobian(const DriftModel& model, const PointSet& points) {
  return fd_consistency(
      points, model.d, model.d,
      [&](const Point& x, std::span<double> out) { model.jacobian(x, out); },
      [&](const Point& x, std::span<double> out) { model.drift(x, out); });
}

ConsistencyReport check_lyapunov_gradient(const DriftModel& model,
                                          const PointSet& points) {
  return fd_consistency(
      points, model.d, 1,
      [&](const Point& x, std::span<double> out) {
        model.lyapunov.gradient(x, out);
      },
      [&](const Point& x, std::span<double> out) {
        out[0] = model.lyapunov.value(x);
      });
}

}  // namespace sdereg
