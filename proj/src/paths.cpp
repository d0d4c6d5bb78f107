#include "sdereg/paths.hpp"

#include <cmath>

#include "sdereg/error.hpp"
#include "sdereg/kernels.hpp"
#include "sdereg/rng.hpp"

namespace sdereg {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : T(horizon), N(steps) {
  if (steps == 0) throw PreconditionError("time grid needs at least one step");
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw PreconditionError("time horizon must be finite and nonnegative");
}

double std_error_from_sums(double sum, double sumsq, std::size_t count) {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double var = (sumsq - sum * sum / n) / (n - 1.0);
  return var > 0.0 ? std::sqrt(var / n) : 0.0;
}

void MomentSum::merge(const MomentSum& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = double(count), nb = double(o.count), n = na + nb;
  const double delta = o.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2 += o.m2 + delta * delta * (na * nb / n);
  count += o.count;
}

double MomentSum::std_error() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double var = m2 / (n - 1.0);
  return var > 0.0 ? std::sqrt(var / n) : 0.0;
}

void fill_path(RandomStream& rng, const TimeGrid& grid, std::size_t m,
               std::span<double> values) {
  const std::size_t total = grid.nodes() * m;
  for (std::size_t j = 0; j < m; ++j) values[j] = 0.0;
  for (std::size_t k = m; k < total; ++k) values[k] = rng.gaussian();
  const auto increments = values.subspan(m, total - m);
  kernels::scale(std::sqrt(grid.dt()), increments, increments);
  for (std::size_t k = m; k < total; ++k) values[k] += values[k - m];
}

BrownianPath sample_path(std::uint64_t seed, const TimeGrid& grid,
                         std::size_t m, std::uint64_t stream) {
  if (m == 0) throw PreconditionError("noise dimension must be positive");
  BrownianPath path{grid, m, std::vector<double>(grid.nodes() * m), seed, stream};
  RandomStream rng(seed, stream);
  fill_path(rng, grid, m, path.values);
  return path;
}

BrownianPath zero_path(const TimeGrid& grid, std::size_t m) {
  return BrownianPath{grid, m, std::vector<double>(grid.nodes() * m, 0.0), 0, 0};
}

BrownianPath restrict(const BrownianPath& path, std::size_t coarse_N) {
  if (coarse_N == 0 || path.grid.N % coarse_N != 0)
    throw GridMismatchError("coarse step count " + std::to_string(coarse_N) +
                            " does not divide " + std::to_string(path.grid.N));
  const std::size_t stride = path.grid.N / coarse_N;
  BrownianPath out{TimeGrid(path.grid.T, coarse_N), path.m,
                   std::vector<double>((coarse_N + 1) * path.m), path.seed,
                   path.stream};
  for (std::size_t k = 0; k <= coarse_N; ++k)
    for (std::size_t j = 0; j < path.m; ++j)
      out.values[k * path.m + j] = path.values[k * stride * path.m + j];
  return out;
}

PathSupStats path_sup_stats(const BrownianPath& path, const DriftModel& model) {
  if (model.m != path.m)
    throw PreconditionError("path and model noise dimensions differ");
  PathSupStats stats;
  std::vector<double> sw(model.d);
  for (std::size_t n = 0; n < path.grid.nodes(); ++n) {
    const auto w = path.at(n);
    model.sigma.apply(w, sw);
    stats.sup_sigma_w = std::max(stats.sup_sigma_w, model.norm_state(sw));
    const double phi = model.phi_noise(w);
    if (n == 0 || phi > stats.sup_phi_w) stats.sup_phi_w = phi;
  }
  return stats;
}

namespace {

// Largest norm of (A W(t_n)) over the nodes, A of shape k x m; `scratch`
// holds k entries.
double sup_linear_norm(const Matrix* a, const NormSpec& norm,
                       std::span<const double> values, std::size_t m,
                       std::span<double> scratch) {
  if (m == 1 && (a == nullptr || a->rows == 1))
    return (a == nullptr ? 1.0 : std::abs((*a)(0, 0))) * kernels::max_abs(values);
  const std::size_t nodes = values.size() / m;
  double best = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    const auto w = values.subspan(n * m, m);
    double v;
    if (a == nullptr) {
      v = norm(w);
    } else {
      a->apply(w, scratch);
      v = norm(scratch);
    }
    best = std::max(best, v);
  }
  return best;
}

template <class SampleValue>
MCEstimate scalar_mc(const TimeGrid& grid, std::size_t m, const McRun& run,
                     std::size_t scratch_size, SampleValue value) {
  if (run.n_samples == 0) throw PreconditionError("n_samples must be positive");
  struct Workspace {
    std::vector<double> values;
    std::vector<double> scratch;
  };
  const MomentSum total = run_blocks(
      run.n_samples, run.threads, [] { return MomentSum{}; },
      [&] {
        return Workspace{std::vector<double>(grid.nodes() * m),
                         std::vector<double>(scratch_size)};
      },
      [&](std::size_t i, MomentSum& acc, Workspace& ws) {
        RandomStream rng(run.seed, i);
        fill_path(rng, grid, m, ws.values);
        acc.add(value(std::span<const double>(ws.values), std::span<double>(ws.scratch)));
      },
      [](MomentSum& t, MomentSum&& p) { t.merge(p); });
  return total.estimate(run.seed);
}

}  // namespace

MCEstimate estimate_exp_moment(double c, double alpha, const TimeGrid& grid,
                               std::size_t m, const McRun& run,
                               const NormSpec& noise_norm) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw PreconditionError("exponential moment requires alpha in [0, 2)");
  if (!(c >= 0.0)) throw PreconditionError("exponential moment requires c >= 0");
  if (m == 0) throw PreconditionError("noise dimension must be positive");
  // exp(c s^alpha) is nondecreasing in s, so the max over nodes is attained
  // at the largest noise norm.
  return scalar_mc(grid, m, run, 0, [&](std::span<const double> w, std::span<double> scratch) {
    const double s = sup_linear_norm(nullptr, noise_norm, w, m, scratch);
    return std::exp(c * std::pow(s, alpha));
  });
}

MCEstimate estimate_poly_moment(double r, const Matrix& sigma,
                                const TimeGrid& grid, std::size_t m,
                                const McRun& run, const NormSpec& state_norm) {
  if (!(r >= 0.0)) throw PreconditionError("polynomial moment requires r >= 0");
  if (sigma.cols != m || sigma.rows == 0)
    throw PreconditionError("sigma must have m columns");
  return scalar_mc(grid, m, run, sigma.rows, [&](std::span<const double> w, std::span<double> scratch) {
    return std::pow(sup_linear_norm(&sigma, state_norm, w, m, scratch), r);
  });
}

}  // namespace sdereg
