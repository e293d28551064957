#include "internal.hpp"

#include "hmcf/hmesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hmcf::cli {

const char* const kDiagnosticsHeader = "step,t,A,V,Wbar,W,maxAbsH,minEdge,diam,neckRadius,flaggedFaces";

namespace {

void write_row(std::ostream& out, const DiagnosticsRecord& r, double diam) {
  out << r.step << ',' << format_double(r.t) << ',' << format_double(r.A) << ',' << format_double(r.V) << ','
      << format_double(r.Wbar) << ',' << format_double(r.W) << ',' << format_double(r.maxAbsH) << ','
      << format_double(r.minEdge) << ',' << format_double(diam) << ',';
  if (r.neckRadius) out << format_double(*r.neckRadius);
  out << ',' << r.flaggedFaces;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << kDiagnosticsHeader << '\n';
  for (const DiagnosticsRecord& r : records) {
    write_row(out, r, r.diameter);
    out << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out = open_out(path);
  write_diagnostics_csv(out, records);
}

// The pair file describes the union of the two surfaces: extensive quantities
// add, maxAbsH and diam take the maximum, minEdge the minimum.
void write_pair_csv(const std::string& path, const std::vector<PairRecord>& records) {
  std::ofstream out = open_out(path);
  out << kDiagnosticsHeader << ",d,monitorF1,monitorFa1\n";
  for (const PairRecord& p : records) {
    DiagnosticsRecord u;
    u.step = p.step;
    u.t = p.t;
    u.A = p.a.A + p.b.A;
    u.V = p.a.V + p.b.V;
    u.Wbar = p.a.Wbar + p.b.Wbar;
    u.W = p.a.W + p.b.W;
    u.maxAbsH = std::max(p.a.maxAbsH, p.b.maxAbsH);
    u.minEdge = std::min(p.a.minEdge, p.b.minEdge);
    u.flaggedFaces = p.a.flaggedFaces + p.b.flaggedFaces;
    write_row(out, u, p.diameter);
    out << ',' << format_double(p.d) << ',' << format_double(p.monitorF1) << ',' << format_double(p.monitorFa1)
        << '\n';
  }
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::runtime_error("csv has no column '" + name + "'");
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r[c]);
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty csv");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      const std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (cell.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
        }
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (row.size() != t.header.size())
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": wrong number of cells");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace hmcf::cli
