#include "sdereg/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "sdereg/error.hpp"
#include "sdereg/serialize.hpp"

namespace sdereg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <class Int>
Int parse_unsigned(std::string_view text) {
  text = trim(text);
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("expected a nonnegative integer, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("expected true or false, got '" + std::string(text) + "'");
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += io::format_double(v[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"model",
       {{"name", [](auto& c, auto v) { c.model_name = std::string(trim(v)); }},
        {"dim", [](auto& c, auto v) { c.dim = parse_unsigned<std::size_t>(v); }},
        {"kappa", [](auto& c, auto v) { c.kappa = io::parse_double(v); }},
        {"state_norm", [](auto& c, auto v) { c.state_norm = parse_norm_kind(trim(v)); }},
        {"noise_norm", [](auto& c, auto v) { c.noise_norm = parse_norm_kind(trim(v)); }}}},
      {"simulation",
       {{"T", [](auto& c, auto v) { c.T = io::parse_double(v); }},
        {"steps", [](auto& c, auto v) { c.steps = parse_unsigned<std::size_t>(v); }},
        {"samples", [](auto& c, auto v) { c.n_samples = parse_unsigned<std::size_t>(v); }},
        {"seed", [](auto& c, auto v) { c.seed = parse_unsigned<std::uint64_t>(v); }},
        {"threads", [](auto& c, auto v) { c.threads = parse_unsigned<unsigned>(v); }},
        {"x0", [](auto& c, auto v) { c.x0 = parse_number_list(v); }},
        {"direction", [](auto& c, auto v) { c.direction = parse_number_list(v); }}}},
      {"regularity",
       {{"ladder", [](auto& c, auto v) { c.ladder = parse_number_list(v); }},
        {"q", [](auto& c, auto v) { c.q = io::parse_double(v); }},
        {"R", [](auto& c, auto v) { c.R = io::parse_double(v); }},
        {"safety", [](auto& c, auto v) { c.safety = io::parse_double(v); }},
        {"lattice_points",
         [](auto& c, auto v) { c.lattice_points = parse_unsigned<std::size_t>(v); }}}},
      {"moments",
       {{"r", [](auto& c, auto v) { c.r = io::parse_double(v); }},
        {"exp_c", [](auto& c, auto v) { c.exp_c = io::parse_double(v); }},
        {"exp_alpha", [](auto& c, auto v) { c.exp_alpha = io::parse_double(v); }}}},
      {"checks",
       {{"lyapunov_slack", [](auto& c, auto v) { c.lyapunov_slack = io::parse_double(v); }},
        {"u_grid", [](auto& c, auto v) { c.u_grid = parse_unsigned<std::size_t>(v); }},
        {"tol", [](auto& c, auto v) { c.tol = io::parse_double(v); }},
        {"eps", [](auto& c, auto v) { c.eps = io::parse_double(v); }},
        {"grid_points",
         [](auto& c, auto v) { c.grid_points = parse_unsigned<std::size_t>(v); }}}},
      {"output",
       {{"path", [](auto& c, auto v) { c.out_path = std::string(trim(v)); }},
        {"format", [](auto& c, auto v) { c.format = parse_output_format(trim(v)); }},
        {"deterministic",
         [](auto& c, auto v) { c.deterministic = parse_bool(v); }}}}};
  return s;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  for (std::size_t start = 0;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(io::parse_double(trim(text.substr(start, comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format '" + std::string(text) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  const std::map<std::string, Setter>* section = nullptr;
  std::string section_name;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section_name = std::string(trim(line.substr(1, line.size() - 2)));
      const auto it = schema().find(section_name);
      if (it == schema().end())
        throw ConfigError("unknown section [" + section_name + "]", line_no);
      section = &it->second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (section == nullptr)
      throw ConfigError("key '" + key + "' outside of any section", line_no);
    const auto it = section->find(key);
    if (it == section->end())
      throw ConfigError("unknown key '" + key + "' in [" + section_name + "]", line_no);
    if (!seen.insert(section_name + "." + key).second)
      throw ConfigError("duplicate key '" + key + "'", line_no);
    try {
      it->second(config, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (key '" + key + "')", line_no);
    } catch (const CatalogError& e) {
      throw ConfigError(std::string(e.what()) + " (key '" + key + "')", line_no);
    }
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out += std::string(k) + " = " + v + "\n";
  };
  out += "[model]\n";
  kv("name", c.model_name);
  kv("dim", std::to_string(c.dim));
  if (c.kappa) kv("kappa", io::format_double(*c.kappa));
  kv("state_norm", std::string(to_string(c.state_norm)));
  kv("noise_norm", std::string(to_string(c.noise_norm)));
  out += "\n[simulation]\n";
  kv("T", io::format_double(c.T));
  kv("steps", std::to_string(c.steps));
  kv("samples", std::to_string(c.n_samples));
  kv("seed", std::to_string(c.seed));
  kv("threads", std::to_string(c.threads));
  kv("x0", list(c.x0));
  kv("direction", list(c.direction));
  out += "\n[regularity]\n";
  kv("ladder", list(c.ladder));
  kv("q", io::format_double(c.q));
  kv("R", io::format_double(c.R));
  kv("safety", io::format_double(c.safety));
  kv("lattice_points", std::to_string(c.lattice_points));
  out += "\n[moments]\n";
  kv("r", io::format_double(c.r));
  kv("exp_c", io::format_double(c.exp_c));
  kv("exp_alpha", io::format_double(c.exp_alpha));
  out += "\n[checks]\n";
  kv("lyapunov_slack", io::format_double(c.lyapunov_slack));
  kv("u_grid", std::to_string(c.u_grid));
  if (c.tol) kv("tol", io::format_double(*c.tol));
  kv("eps", io::format_double(c.eps));
  kv("grid_points", std::to_string(c.grid_points));
  out += "\n[output]\n";
  kv("path", c.out_path);
  kv("format", std::string(to_string(c.format)));
  kv("deterministic", c.deterministic ? "true" : "false");
  return out;
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.dim == 0) fail("dim must be positive");
  if (c.kappa && !(*c.kappa >= 0.0)) fail("kappa must be nonnegative");
  if (!(c.T >= 0.0) || !std::isfinite(c.T)) fail("T must be finite and nonnegative");
  if (c.steps == 0) fail("steps must be positive");
  if (c.n_samples < 2) fail("samples must be at least 2");
  if (c.x0.size() != c.dim) fail("x0 must have dim entries");
  if (c.direction.size() != c.dim) fail("direction must have dim entries");
  if (c.ladder.empty()) fail("ladder must not be empty");
  for (std::size_t i = 0; i < c.ladder.size(); ++i) {
    if (!(c.ladder[i] > 0.0 && c.ladder[i] < 1.0)) fail("ladder entries must lie in (0, 1)");
    if (i > 0 && !(c.ladder[i] < c.ladder[i - 1])) fail("ladder must be strictly decreasing");
  }
  if (!(c.q >= 0.0)) fail("q must be nonnegative");
  if (!(c.R >= 0.0)) fail("R must be nonnegative");
  if (!(c.safety >= 1.0)) fail("safety must be at least 1");
  if (c.lattice_points == 0) fail("lattice_points must be positive");
  if (!(c.r >= 0.0)) fail("r must be nonnegative");
  if (!(c.exp_c >= 0.0)) fail("exp_c must be nonnegative");
  if (!(c.exp_alpha >= 0.0 && c.exp_alpha < 2.0)) fail("exp_alpha must lie in [0, 2)");
  if (!(c.lyapunov_slack >= 0.0)) fail("lyapunov_slack must be nonnegative");
  if (c.u_grid < 2) fail("u_grid must be at least 2");
  if (c.tol && !(*c.tol > 0.0)) fail("tol must be positive");
  if (!(c.eps > 0.0)) fail("eps must be positive");
  if (c.grid_points == 0) fail("grid_points must be positive");
}

}  // namespace sdereg
