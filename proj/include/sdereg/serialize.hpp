#pragma once

// JSON and CSV encodings of the library's records. Doubles are written in
// shortest round-trip form; non-finite values become the strings "inf",
// "-inf" and "nan" so that every document stays valid JSON.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sdereg/bounds.hpp"
#include "sdereg/integrator.hpp"
#include "sdereg/model.hpp"
#include "sdereg/paths.hpp"
#include "sdereg/regularity.hpp"
#include "sdereg/variational.hpp"

namespace sdereg::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
/// Inverse of format_double; throws ConfigError on malformed text.
double parse_double(std::string_view text);

Json number(double v);
double number_from(const Json& j);

Json to_json(const ConditionReport& r);
ConditionReport condition_report_from_json(const Json& j);

Json to_json(const ConsistencyReport& r);

Json to_json(const MCEstimate& e);
MCEstimate mc_estimate_from_json(const Json& j);

Json to_json(const RegularityReport& r);
RegularityReport regularity_report_from_json(const Json& j);

Json to_json(const GrowthBoundCheck& c);
Json to_json(const PathwiseDistanceBound& b);
Json to_json(const AprioriBound& b);
Json to_json(const FgDecompositionCheck& c);
Json to_json(const KEstimate& k);
Json to_json(const DistanceEstimate& e);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string write_csv(const CsvTable& table);
/// Parses text written by write_csv; throws ConfigError on malformed input.
CsvTable read_csv(std::string_view text);

/// Columns t, W_1..W_m.
CsvTable path_table(const BrownianPath& path);
/// Columns t, X_1..X_d.
CsvTable solution_table(const SolutionPath& sol);
/// Columns t, D_1..D_d (direction mode) or t, D_i_j (full flow).
CsvTable variational_table(const VariationalPath& var);
/// Columns h, empirical_mean, empirical_se, theoretical, pass.
CsvTable report_table(const RegularityReport& r);

/// Rebuilds a solution from solution_table output. `initial` is row 0.
SolutionPath solution_from_table(const CsvTable& table);
/// Rebuilds the per-rung part of a report from report_table output.
RegularityReport report_from_table(const CsvTable& table);

}  // namespace sdereg::io
