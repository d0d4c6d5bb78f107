#pragma once

// Experiment configuration: a flat "key = value" text with [sections].
//
//   [model]       name, dim, kappa, state_norm, noise_norm
//   [simulation]  T, steps, samples, seed, threads, x0, direction
//   [regularity]  ladder, q, R, safety, lattice_points
//   [moments]     r, exp_c, exp_alpha
//   [checks]      lyapunov_slack, u_grid, tol, eps, grid_points
//   [output]      path, format, deterministic
//
// Lists are comma separated. '#' starts a comment. Unknown sections or keys
// and duplicate keys are rejected with the offending line number.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdereg/norm.hpp"

namespace sdereg {

enum class OutputFormat { json, csv };

struct ExperimentConfig {
  std::string model_name = "linear1d";
  std::size_t dim = 1;
  std::optional<double> kappa;
  NormKind state_norm = NormKind::euclidean;
  NormKind noise_norm = NormKind::euclidean;

  double T = 1.0;
  std::size_t steps = 1024;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<double> x0{0.5};
  std::vector<double> direction{1.0};

  std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double q = 1.0;
  double R = 1.0;
  double safety = 1.2;
  std::size_t lattice_points = 9;

  double r = 1.0;
  double exp_c = 1.0;
  double exp_alpha = 1.0;

  double lyapunov_slack = 1e-9;
  std::size_t u_grid = 33;
  std::optional<double> tol;
  double eps = 1e-5;
  std::size_t grid_points = 41;

  std::string out_path;  // empty writes to stdout
  OutputFormat format = OutputFormat::json;
  bool deterministic = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError carrying the line number of the first problem.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Range checks shared by the file parser and the CLI flags.
void validate_config(const ExperimentConfig& config);

std::vector<double> parse_number_list(std::string_view text);
std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view text);

}  // namespace sdereg
