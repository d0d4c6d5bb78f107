#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdereg/matrix.hpp"
#include "sdereg/model.hpp"
#include "sdereg/norm.hpp"
#include "sdereg/parallel.hpp"

namespace sdereg {

class RandomStream;

/// Uniform grid t_n = n T / N, n = 0..N.
struct TimeGrid {
  double T = 1.0;
  std::size_t N = 1;

  TimeGrid() = default;
  /// Throws PreconditionError unless N >= 1 and T >= 0 is finite.
  TimeGrid(double horizon, std::size_t steps);

  double dt() const { return T / static_cast<double>(N); }
  double time(std::size_t n) const {
    return n == N ? T : T * static_cast<double>(n) / static_cast<double>(N);
  }
  std::size_t nodes() const { return N + 1; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// One Brownian realization at the grid nodes, row n holding W(t_n).
struct BrownianPath {
  TimeGrid grid;
  std::size_t m = 1;
  std::vector<double> values;  // (N + 1) x m, row-major
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::span<const double> at(std::size_t n) const {
    return {values.data() + n * m, m};
  }
};

/// Summary of a Monte Carlo estimate.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_samples)
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Running first and second moments, merged exactly in a fixed order.
struct MomentSum {
  double mean_ = 0.0;
  double m2 = 0.0;  // sum of squared deviations from mean_
  std::size_t count = 0;

  void add(double v) {
    ++count;
    const double delta = v - mean_;
    mean_ += delta / double(count);
    m2 += delta * (v - mean_);
  }
  void merge(const MomentSum& o);
  double mean() const { return mean_; }
  /// Standard error of the mean; 0 for fewer than two samples.
  double std_error() const;
  MCEstimate estimate(std::uint64_t seed) const {
    return {mean(), std_error(), count, seed};
  }
};

/// Standard error from raw sums; clamps tiny negative variances to zero.
double std_error_from_sums(double sum, double sumsq, std::size_t count);

/// Fills `values` ((N + 1) * m entries) with a path drawn from `rng`.
void fill_path(RandomStream& rng, const TimeGrid& grid, std::size_t m,
               std::span<double> values);

/// Path from substream (seed, stream). Identical arguments give bitwise
/// identical values.
BrownianPath sample_path(std::uint64_t seed, const TimeGrid& grid,
                         std::size_t m, std::uint64_t stream = 0);

/// W identically zero on the grid.
BrownianPath zero_path(const TimeGrid& grid, std::size_t m);

/// Same realization observed on the coarser grid with coarse_N steps.
/// Throws GridMismatchError unless coarse_N divides path.grid.N.
BrownianPath restrict(const BrownianPath& path, std::size_t coarse_N);

struct PathSupStats {
  double sup_sigma_w = 0.0;  // max_n ||sigma W(t_n)|| in the state norm
  double sup_phi_w = 0.0;    // max_n phi(W(t_n))
};

PathSupStats path_sup_stats(const BrownianPath& path, const DriftModel& model);

/// E[ max_n exp(c |||W(t_n)|||^alpha) ]. Throws PreconditionError for
/// alpha >= 2 or c < 0.
MCEstimate estimate_exp_moment(double c, double alpha, const TimeGrid& grid,
                               std::size_t m, const McRun& run,
                               const NormSpec& noise_norm = {});

/// E[ max_n ||sigma W(t_n)||^r ] with sigma of shape d x m.
MCEstimate estimate_poly_moment(double r, const Matrix& sigma,
                                const TimeGrid& grid, std::size_t m,
                                const McRun& run,
                                const NormSpec& state_norm = {});

}  // namespace sdereg
