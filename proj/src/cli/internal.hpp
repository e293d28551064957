#pragma once

#include "hmcf/certify.hpp"
#include "hmcf/flow.hpp"
#include "hmcf/shapes.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace hmcf::cli {

using json = nlohmann::ordered_json;

// config.cpp
json to_json(const FlowConfig& c);
/// Fields present in j override `base`.
FlowConfig flow_config_from_json(const json& j, FlowConfig base = {});
json to_json(const ShapeSpec& s);
ShapeSpec shape_from_json(const json& j, ShapeSpec base = {});
json to_json(const Certificate& c);
json to_json(const Axis& a);
Axis axis_from_json(const json& j);
/// Digest of the numeric inputs of a run: flow config, shape and mesh.
std::string config_digest(const json& flow, const json& shape, const std::string& mesh_digest);
json read_json(const std::string& path);
void write_json(const json& j, const std::string& path);
std::string now_iso8601();

// csv.cpp
extern const char* const kDiagnosticsHeader;
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
void write_pair_csv(const std::string& path, const std::vector<PairRecord>& records);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty cells read as NaN

  /// Column index by name, -1 if absent.
  int column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};
/// Throws std::runtime_error if the file cannot be read.
CsvTable read_csv(const std::string& path);

// svg.cpp
struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
};
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series);

}  // namespace hmcf::cli
