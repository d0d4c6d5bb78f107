#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdereg/cli.hpp"
#include "sdereg/config.hpp"
#include "sdereg/error.hpp"

int main(int argc, char** argv) {
  using sdereg::ExperimentConfig;
  namespace cli = sdereg::cli;

  CLI::App app{"Pathwise and Monte Carlo checks for additive-noise SDEs"};
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> model, x0, dir, ladder, out, format;
  std::optional<double> T, q, R, tol, safety, kappa, r;
  std::optional<std::size_t> steps, samples, dim;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool deterministic = false;

  std::string names;
  for (const auto& s : cli::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", subcommand, "One of: " + names)->required();
  app.add_option("--config", config_path, "Experiment file ([section] key = value)");
  app.add_option("--model", model, "Catalog model name");
  app.add_option("--dim", dim, "State dimension");
  app.add_option("--kappa", kappa, "Override the model's growth constant");
  app.add_option("--T", T, "Time horizon");
  app.add_option("--steps", steps, "Number of Euler steps");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--x0", x0, "Initial value, comma separated");
  app.add_option("--dir", dir, "Perturbation direction, comma separated");
  app.add_option("--ladder", ladder, "Decreasing h values in (0,1), comma separated");
  app.add_option("--q", q, "Modulus exponent");
  app.add_option("--R", R, "Ball radius for the moment constants");
  app.add_option("--r", r, "Moment order");
  app.add_option("--out", out, "Output file (default: stdout)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--threads", threads, "Worker cap (0 = all cores); results do not depend on it");
  app.add_flag("--deterministic", deterministic, "Omit the timestamp from JSON output");
  app.add_option("--tol", tol, "Adaptive solve tolerance");
  app.add_option("--safety", safety, "Upward factor applied to K and C");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw sdereg::ConfigError("cannot read '" + config_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      config = sdereg::parse_config(text.str());
    }
    if (model) config.model_name = *model;
    if (dim) config.dim = *dim;
    if (kappa) config.kappa = *kappa;
    if (T) config.T = *T;
    if (steps) config.steps = *steps;
    if (samples) config.n_samples = *samples;
    if (seed) config.seed = *seed;
    if (x0) config.x0 = sdereg::parse_number_list(*x0);
    if (dir) config.direction = sdereg::parse_number_list(*dir);
    if (ladder) config.ladder = sdereg::parse_number_list(*ladder);
    if (q) config.q = *q;
    if (R) config.R = *R;
    if (r) config.r = *r;
    if (out) config.out_path = *out;
    if (format) config.format = sdereg::parse_output_format(*format);
    if (threads) config.threads = *threads;
    if (deterministic) config.deterministic = true;
    if (tol) config.tol = *tol;
    if (safety) config.safety = *safety;
  } catch (const sdereg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::run(subcommand, config, std::cout, std::cerr);
}
