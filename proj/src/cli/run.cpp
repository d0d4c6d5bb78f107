#include "sdereg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>

#include "sdereg/bounds.hpp"
#include "sdereg/error.hpp"
#include "sdereg/integrator.hpp"
#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"
#include "sdereg/regularity.hpp"
#include "sdereg/serialize.hpp"
#include "sdereg/variational.hpp"

namespace sdereg::cli {

namespace {

using io::Json;

constexpr std::size_t kMaxGridPoints = 10000;
constexpr double kSweepHalfWidth = 10.0;
constexpr double kConsistencyTolerance = 1e-5;

struct Outcome {
  bool pass = true;
  Json json;
  io::CsvTable csv;
};

DriftModel make_model(const ExperimentConfig& c) {
  CatalogOptions opts;
  opts.dim = c.dim;
  opts.state_norm = c.state_norm;
  opts.noise_norm = c.noise_norm;
  opts.kappa = c.kappa;
  return catalog_model(c.model_name, opts);
}

McRun mc_run(const ExperimentConfig& c) { return {c.n_samples, c.seed, c.threads}; }

PointSet sweep_points(std::size_t dim, std::size_t per_axis, std::uint64_t seed) {
  if (std::pow(double(per_axis), double(dim)) <= double(kMaxGridPoints))
    return uniform_grid(dim, -kSweepHalfWidth, kSweepHalfWidth, per_axis);
  return random_points(dim, -kSweepHalfWidth, kSweepHalfWidth, kMaxGridPoints, seed);
}

std::vector<double> shifted(const std::vector<double>& x, const std::vector<double>& dir,
                            double h) {
  std::vector<double> y(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * dir[i];
  return y;
}

io::CsvTable mc_row_table(const std::vector<MCEstimate>& rows) {
  io::CsvTable t{{"quantity", "mean", "std_error", "n_samples", "seed"}, {}};
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.rows.push_back({double(i), rows[i].mean, rows[i].std_error,
                      double(rows[i].n_samples), double(rows[i].seed)});
  return t;
}

Outcome check_model(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  model.validate();
  const PointSet xs = sweep_points(model.d, c.grid_points, c.seed);
  const PointSet zs = sweep_points(model.m, c.grid_points, c.seed + 1);
  const PointSet probes = random_points(model.d, -kSweepHalfWidth, kSweepHalfWidth, 256, c.seed);

  const ConditionReport growth = check_derivative_growth(model, xs, 4, c.seed, c.lyapunov_slack);
  const ConditionReport lyap = check_lyapunov(model, xs, zs, c.lyapunov_slack);
  const ConditionReport dominates = check_lyapunov_dominates_norm(model, xs, c.lyapunov_slack);
  const ConsistencyReport jac = check_jacobian(model, probes);
  const ConsistencyReport grad = check_lyapunov_gradient(model, probes);

  Outcome o;
  o.pass = growth.ok() && lyap.ok() && dominates.ok() &&
           jac.max_rel_error <= kConsistencyTolerance &&
           grad.max_rel_error <= kConsistencyTolerance;
  o.json = {{"derivative_growth", io::to_json(growth)},
            {"lyapunov", io::to_json(lyap)},
            {"lyapunov_dominates_norm", io::to_json(dominates)},
            {"jacobian_consistency", io::to_json(jac)},
            {"gradient_consistency", io::to_json(grad)}};
  o.csv.header = {"check", "checked_points", "violation_count", "max_ratio"};
  const ConditionReport* reports[] = {&growth, &lyap, &dominates};
  for (std::size_t i = 0; i < 3; ++i)
    o.csv.rows.push_back({double(i), double(reports[i]->checked_points),
                          double(reports[i]->violation_count), reports[i]->max_ratio});
  return o;
}

Outcome check_bounds(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  const TimeGrid grid(c.T, c.steps);
  const std::vector<double> y = shifted(c.x0, c.direction, c.ladder.front());

  std::size_t apriori_fail = 0, distance_fail = 0, growth_fail = 0;
  double worst_apriori = 0.0, worst_distance = 0.0;
  io::CsvTable table{{"stream", "apriori_sup", "apriori_bound", "distance_lhs",
                      "distance_rhs", "growth_margin"},
                     {}};
  for (std::size_t i = 0; i < c.n_samples; ++i) {
    const BrownianPath path = sample_path(c.seed, grid, model.m, i);
    const AprioriBound ap = apriori_bound(model, c.x0, path);
    const PathwiseDistanceBound pd = pathwise_distance_bound(model, c.x0, y, path, c.u_grid);
    const SolutionPath sol = euler_solve(model, c.x0, path);
    const GrowthBoundCheck gb =
        growth_bound_check(model, sol, variational_solve(model, sol, c.direction));
    apriori_fail += !ap.ok;
    distance_fail += !pd.ok;
    growth_fail += !gb.ok;
    if (ap.bound > 0) worst_apriori = std::max(worst_apriori, ap.sup_solution / ap.bound);
    if (pd.rhs > 0) worst_distance = std::max(worst_distance, pd.lhs / pd.rhs);
    table.rows.push_back({double(i), ap.sup_solution, ap.bound, pd.lhs, pd.rhs, gb.margin});
  }
  const FgDecompositionCheck fg = fg_decomposition_check(model, c.x0, y, grid, mc_run(c));

  Outcome o;
  o.pass = apriori_fail == 0 && distance_fail == 0 && growth_fail == 0 && fg.ok;
  o.json = {{"draws", c.n_samples},
            {"apriori", {{"violations", apriori_fail}, {"max_ratio", io::number(worst_apriori)}}},
            {"pathwise_distance",
             {{"violations", distance_fail},
              {"max_ratio", io::number(worst_distance)},
              {"u_grid", c.u_grid}}},
            {"variational_growth", {{"violations", growth_fail}}},
            {"fg_decomposition", io::to_json(fg)}};
  o.csv = std::move(table);
  return o;
}

Outcome solve(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  const TimeGrid grid(c.T, c.steps);
  const BrownianPath path = sample_path(c.seed, grid, model.m);
  Outcome o;
  SolutionPath sol;
  if (c.tol) {
    AdaptiveSolution a = solve_adaptive(model, c.x0, path, *c.tol);
    o.pass = a.converged;
    o.json["adaptive"] = {{"tol", io::number(*c.tol)},
                          {"N_used", a.N_used},
                          {"est_error", io::number(a.est_error)},
                          {"converged", a.converged}};
    sol = std::move(a.solution);
  } else {
    sol = euler_solve(model, c.x0, path);
  }
  const BrownianPath used = sol.grid.N == grid.N ? path : restrict(path, sol.grid.N);
  o.json["residual"] = io::number(verify_integral_equation(model, sol, used));
  o.csv = io::solution_table(sol);
  o.json["solution"] = {{"header", o.csv.header}, {"rows", o.csv.rows}};
  return o;
}

Outcome variational(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  const TimeGrid grid(c.T, c.steps);
  const BrownianPath path = sample_path(c.seed, grid, model.m);
  const SolutionPath sol = euler_solve(model, c.x0, path);
  const VariationalPath var = variational_solve(model, sol, c.direction);
  const GrowthBoundCheck gb = growth_bound_check(model, sol, var);
  const double fd = finite_difference_check(model, c.x0, c.direction, path, c.eps);
  Outcome o;
  o.pass = gb.ok;
  o.csv = io::variational_table(var);
  o.json = {{"growth_bound", io::to_json(gb)},
            {"finite_difference", {{"eps", io::number(c.eps)}, {"max_discrepancy", io::number(fd)}}},
            {"variational", {{"header", o.csv.header}, {"rows", o.csv.rows}}}};
  return o;
}

Outcome moments(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  const TimeGrid grid(c.T, c.steps);
  const McRun run = mc_run(c);
  const MCEstimate poly = estimate_poly_moment(c.r, model.sigma, grid, model.m, run, model.norm_state);
  const MCEstimate expo =
      estimate_exp_moment(c.exp_c, c.exp_alpha, grid, model.m, run, model.norm_noise);
  const MCEstimate sol = moment_bound_check(model, c.R, c.r, grid, c.lattice_points, run);
  Outcome o;
  o.pass = std::isfinite(poly.mean) && std::isfinite(expo.mean) && std::isfinite(sol.mean);
  o.json = {{"poly_moment", {{"r", io::number(c.r)}, {"estimate", io::to_json(poly)}}},
            {"exp_moment",
             {{"c", io::number(c.exp_c)},
              {"alpha", io::number(c.exp_alpha)},
              {"estimate", io::to_json(expo)}}},
            {"solution_moment",
             {{"R", io::number(c.R)},
              {"lattice_points", c.lattice_points},
              {"estimate", io::to_json(sol)}}}};
  o.csv = mc_row_table({poly, expo, sol});
  return o;
}

Outcome modulus(const ExperimentConfig& c) {
  const DriftModel model = make_model(c);
  const TimeGrid grid(c.T, c.steps);
  const RegularityReport r = verify_modulus(model, c.x0, c.direction, c.ladder, c.q, c.R,
                                            grid, mc_run(c), {c.safety, c.lattice_points});
  Outcome o;
  o.pass = r.complete && r.pass;
  o.json = {{"report", io::to_json(r)}};
  o.csv = io::report_table(r);
  return o;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Outcome dispatch(std::string_view sub, const ExperimentConfig& c) {
  if (sub == "check-model") return check_model(c);
  if (sub == "check-bounds") return check_bounds(c);
  if (sub == "solve") return solve(c);
  if (sub == "variational") return variational(c);
  if (sub == "moments") return moments(c);
  return modulus(c);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"check-model", "check-bounds", "solve",
                                                 "variational", "moments", "verify-modulus"};
  return names;
}

int run(std::string_view subcommand, const ExperimentConfig& config, std::ostream& out,
        std::ostream& err) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return kExitUsage;
  }
  Outcome o;
  try {
    validate_config(config);
    o = dispatch(subcommand, config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CatalogError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  std::string text;
  if (config.format == OutputFormat::csv) {
    text = io::write_csv(o.csv);
  } else {
    Json doc;
    doc["subcommand"] = std::string(subcommand);
    if (!config.deterministic) doc["generated_at"] = timestamp();
    doc["model"] = config.model_name;
    doc["seed"] = config.seed;
    doc["T"] = io::number(config.T);
    doc["steps"] = config.steps;
    doc["n_samples"] = config.n_samples;
    doc["pass"] = o.pass;
    for (auto& [k, v] : o.json.items()) doc[k] = v;
    text = doc.dump(2) + "\n";
  }

  if (config.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open '" << config.out_path << "' for writing\n";
      return kExitUsage;
    }
    file << text;
  }
  if (!o.pass) err << subcommand << ": checks failed\n";
  return o.pass ? kExitPass : kExitCheckFailed;
}

}  // namespace sdereg::cli
