#include "sdereg/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdereg/error.hpp"

namespace sdereg::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("malformed number '" + std::string(text) + "'");
  return v;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw ConfigError("expected a number");
}

namespace {

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> vec_from(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from(x));
  return out;
}

}  // namespace

Json to_json(const ConditionReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"x", vec(v.x)}, {"z", vec(v.z)},
                          {"lhs", number(v.lhs)}, {"rhs", number(v.rhs)}});
  return {{"checked_points", r.checked_points},
          {"violations", violations},
          {"violation_count", r.violation_count},
          {"max_ratio", number(r.max_ratio)},
          {"slack", number(r.slack)}};
}

ConditionReport condition_report_from_json(const Json& j) {
  ConditionReport r;
  r.checked_points = j.at("checked_points").get<std::size_t>();
  for (const auto& v : j.at("violations"))
    r.violations.push_back({vec_from(v.at("x")), vec_from(v.at("z")),
                            number_from(v.at("lhs")), number_from(v.at("rhs"))});
  r.violation_count = j.contains("violation_count")
                          ? j.at("violation_count").get<std::size_t>()
                          : r.violations.size();
  r.max_ratio = number_from(j.at("max_ratio"));
  if (j.contains("slack")) r.slack = number_from(j.at("slack"));
  return r;
}

Json to_json(const ConsistencyReport& r) {
  return {{"checked_points", r.checked_points},
          {"max_rel_error", number(r.max_rel_error)},
          {"worst_point", vec(r.worst_point)}};
}

Json to_json(const MCEstimate& e) {
  return {{"mean", number(e.mean)},
          {"std_error", number(e.std_error)},
          {"n_samples", e.n_samples},
          {"seed", e.seed}};
}

MCEstimate mc_estimate_from_json(const Json& j) {
  return {number_from(j.at("mean")), number_from(j.at("std_error")),
          j.at("n_samples").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
}

Json to_json(const RegularityReport& r) {
  const auto& c = r.constants;
  Json empirical = Json::array();
  for (const auto& e : r.empirical) empirical.push_back(to_json(e));
  Json rung_pass = Json::array();
  for (bool b : r.rung_pass) rung_pass.push_back(b);
  Json out = {
      {"model", r.model},
      {"ladder", vec(r.ladder)},
      {"empirical", empirical},
      {"theoretical", vec(r.theoretical)},
      {"rung_pass", rung_pass},
      {"fitted_q", number(r.fitted_q)},
      {"fitted_c", number(r.fitted_c)},
      {"pass", r.pass},
      {"complete", r.complete},
      {"constants",
       {{"R", number(c.R)},
        {"q", number(c.q)},
        {"T", number(c.T)},
        {"K", number(c.K)},
        {"Kcal", number(c.Kcal)},
        {"c_local", number(c.c_local)},
        {"C", number(c.C)},
        {"c_global", number(c.c_global)},
        {"safety", number(c.safety)},
        {"lattice_points", c.lattice_points},
        {"K_estimate", to_json(c.K_estimate)},
        {"C_estimate", to_json(c.C_estimate)}}}};
  if (!r.complete) out["failure"] = r.failure;
  return out;
}

RegularityReport regularity_report_from_json(const Json& j) {
  RegularityReport r;
  r.model = j.at("model").get<std::string>();
  r.ladder = vec_from(j.at("ladder"));
  for (const auto& e : j.at("empirical")) r.empirical.push_back(mc_estimate_from_json(e));
  r.theoretical = vec_from(j.at("theoretical"));
  for (const auto& b : j.at("rung_pass")) r.rung_pass.push_back(b.get<bool>());
  r.fitted_q = number_from(j.at("fitted_q"));
  r.fitted_c = number_from(j.at("fitted_c"));
  r.pass = j.at("pass").get<bool>();
  r.complete = j.at("complete").get<bool>();
  if (j.contains("failure")) r.failure = j.at("failure").get<std::string>();
  const Json& c = j.at("constants");
  auto& k = r.constants;
  k.R = number_from(c.at("R"));
  k.q = number_from(c.at("q"));
  k.T = number_from(c.at("T"));
  k.K = number_from(c.at("K"));
  k.Kcal = number_from(c.at("Kcal"));
  k.c_local = number_from(c.at("c_local"));
  k.C = number_from(c.at("C"));
  k.c_global = number_from(c.at("c_global"));
  k.safety = number_from(c.at("safety"));
  k.lattice_points = c.at("lattice_points").get<std::size_t>();
  k.K_estimate = mc_estimate_from_json(c.at("K_estimate"));
  k.C_estimate = mc_estimate_from_json(c.at("C_estimate"));
  return r;
}

Json to_json(const GrowthBoundCheck& c) {
  return {{"ok", c.ok}, {"margin", number(c.margin)}};
}

Json to_json(const PathwiseDistanceBound& b) {
  return {{"lhs", number(b.lhs)}, {"rhs", number(b.rhs)}, {"ok", b.ok},
          {"u_grid_used", b.u_grid_used}};
}

Json to_json(const AprioriBound& b) {
  return {{"bound", number(b.bound)}, {"sup_solution", number(b.sup_solution)},
          {"ok", b.ok}};
}

Json to_json(const FgDecompositionCheck& c) {
  return {{"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"ok", c.ok}};
}

Json to_json(const KEstimate& k) {
  return {{"K", number(k.K)},
          {"safety", number(k.safety)},
          {"raw", to_json(k.raw)},
          {"phi_moment", to_json(k.phi_moment)},
          {"square_moment", to_json(k.square_moment)},
          {"lattice_size", k.lattice_size},
          {"excluded", k.excluded}};
}

Json to_json(const DistanceEstimate& e) {
  return {{"estimate", to_json(e.estimate)},
          {"argmax_node", e.argmax_node},
          {"excluded", e.excluded}};
}

std::string write_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable read_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    for (std::size_t start = 0;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size())
      throw ConfigError("CSV row has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(table.header.size()),
                        line_no);
    std::vector<double> row;
    row.reserve(cells.size());
    try {
      for (auto c : cells) row.push_back(parse_double(c));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ConfigError("empty CSV document");
  return table;
}

namespace {

CsvTable grid_table(const TimeGrid& grid, std::string_view prefix, std::size_t width,
                    const std::vector<double>& values) {
  CsvTable t;
  t.header.push_back("t");
  for (std::size_t j = 0; j < width; ++j)
    t.header.push_back(std::string(prefix) + std::to_string(j + 1));
  for (std::size_t n = 0; n < grid.nodes(); ++n) {
    std::vector<double> row{grid.time(n)};
    for (std::size_t j = 0; j < width; ++j) row.push_back(values[n * width + j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

CsvTable path_table(const BrownianPath& path) {
  return grid_table(path.grid, "W_", path.m, path.values);
}

CsvTable solution_table(const SolutionPath& sol) {
  return grid_table(sol.grid, "X_", sol.d, sol.states);
}

CsvTable variational_table(const VariationalPath& var) {
  if (var.columns == 1) return grid_table(var.grid, "D_", var.d, var.values);
  CsvTable t = grid_table(var.grid, "D_", var.d * var.columns, var.values);
  for (std::size_t j = 0; j < var.columns; ++j)
    for (std::size_t i = 0; i < var.d; ++i)
      t.header[1 + j * var.d + i] =
          "D_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  return t;
}

CsvTable report_table(const RegularityReport& r) {
  CsvTable t;
  t.header = {"h", "empirical_mean", "empirical_se", "theoretical", "pass"};
  for (std::size_t i = 0; i < r.empirical.size(); ++i)
    t.rows.push_back({r.ladder[i], r.empirical[i].mean, r.empirical[i].std_error,
                      r.theoretical[i], r.rung_pass[i] ? 1.0 : 0.0});
  return t;
}

SolutionPath solution_from_table(const CsvTable& table) {
  if (table.header.size() < 2 || table.header[0] != "t" || table.rows.size() < 2)
    throw ConfigError("not a solution table");
  SolutionPath sol;
  sol.d = table.header.size() - 1;
  sol.grid = TimeGrid(table.rows.back()[0], table.rows.size() - 1);
  for (const auto& row : table.rows)
    sol.states.insert(sol.states.end(), row.begin() + 1, row.end());
  sol.initial.assign(table.rows[0].begin() + 1, table.rows[0].end());
  return sol;
}

RegularityReport report_from_table(const CsvTable& table) {
  if (table.header != std::vector<std::string>{"h", "empirical_mean", "empirical_se",
                                               "theoretical", "pass"})
    throw ConfigError("not a regularity report table");
  RegularityReport r;
  r.pass = true;
  for (const auto& row : table.rows) {
    r.ladder.push_back(row[0]);
    r.empirical.push_back({row[1], row[2], 0, 0});
    r.theoretical.push_back(row[3]);
    r.rung_pass.push_back(row[4] != 0.0);
    r.pass = r.pass && row[4] != 0.0;
  }
  return r;
}

}  // namespace sdereg::io
