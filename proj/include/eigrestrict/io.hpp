/**
 * @file io.hpp
 * @brief CSV serialization of grids, systems and experiment reports.
 *
 * Grid CSV:    header `x0,...,xd,weight`, one node per line.
 * System CSV:  one function per line, one column per node; metadata in a JSON
 *              sidecar `<file>.json` (family, node count, labels, t).
 * Report CSV:  `# key = value` config echo, then columns `l,lambda,quantity,value`,
 *              then a `# verdicts` block with one `# verdict,...` line per check.
 * All floating point values are written with 17 significant digits.
 */
#pragma once

#include "eigrestrict/experiments.hpp"
#include "eigrestrict/geometry.hpp"
#include "eigrestrict/systems.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigrestrict {

inline std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInfinity;
  if (s == "-inf") return -kInfinity;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline void write_grid_csv(std::ostream& os, const SubmanifoldGrid& grid) {
  const int dim = grid.ambient_dim();
  for (int c = 0; c <= dim; ++c) os << 'x' << c << ',';
  os << "weight\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& x = grid.nodes()[i].coords();
    for (int c = 0; c <= dim; ++c) os << fmt17(x(c)) << ',';
    os << fmt17(grid.weights()[i]) << '\n';
  }
}

inline nlohmann::json system_sidecar(const SystemMatrix& sys, const SubmanifoldGrid& grid) {
  nlohmann::json j;
  j["family"] = sys.family;
  j["functions"] = sys.count();
  j["nodes"] = sys.node_count();
  j["chart"] = std::string(to_string(grid.chart().kind));
  j["k"] = grid.dim();
  j["d"] = grid.ambient_dim();
  j["resolution"] = grid.resolution();
  j["t"] = std::vector<double>(sys.t.data(), sys.t.data() + sys.t.size());
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : sys.labels) {
    nlohmann::json e{{"degree", l.degree}, {"index", l.index}};
    if (l.node != std::numeric_limits<std::size_t>::max()) e["node"] = l.node;
    labels.push_back(e);
  }
  j["labels"] = labels;
  return j;
}

inline void write_system_csv(std::ostream& os, const SystemMatrix& sys) {
  for (Eigen::Index j = 0; j < sys.values.rows(); ++j) {
    for (Eigen::Index i = 0; i < sys.values.cols(); ++i) {
      if (i) os << ',';
      os << fmt17(sys.values(j, i));
    }
    os << '\n';
  }
}

/// Writes `path` and `path.json`.
inline void save_system(const std::filesystem::path& path, const SystemMatrix& sys, const SubmanifoldGrid& grid) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_system_csv(os, sys);
  std::ofstream js(path.string() + ".json");
  if (!js) throw std::runtime_error("cannot write " + path.string() + ".json");
  js << system_sidecar(sys, grid).dump(2) << '\n';
}

inline SystemMatrix load_system(const std::filesystem::path& path) {
  std::ifstream js(path.string() + ".json");
  if (!js) throw std::runtime_error("cannot read " + path.string() + ".json");
  const nlohmann::json meta = nlohmann::json::parse(js);
  SystemMatrix sys;
  sys.family = meta.at("family").get<std::string>();
  const auto rows = meta.at("functions").get<Eigen::Index>();
  const auto cols = meta.at("nodes").get<Eigen::Index>();
  sys.values.resize(rows, cols);
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": too few rows");
    std::stringstream ss(line);
    std::string cell;
    for (Eigen::Index i = 0; i < cols; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error(path.string() + ": too few columns");
      sys.values(j, i) = parse_double(cell);
    }
  }
  const auto t = meta.at("t").get<std::vector<double>>();
  sys.t = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  for (const auto& e : meta.at("labels")) {
    FunctionLabel l;
    l.degree = e.at("degree").get<int>();
    l.index = e.at("index").get<int>();
    if (e.contains("node")) l.node = e.at("node").get<std::size_t>();
    sys.labels.push_back(l);
  }
  return sys;
}

inline void write_report_csv(std::ostream& os, const ExperimentReport& rep) {
  os << "# experiment = " << rep.experiment << '\n';
  for (const auto& [k, v] : rep.config)
    if (k != "experiment") os << "# " << k << " = " << v << '\n';
  for (const auto& [k, v] : rep.targets) os << "# target " << k << " = " << fmt17(v) << '\n';
  os << "l,lambda,quantity,value\n";
  for (const auto& r : rep.rows) os << r.l << ',' << fmt17(r.lambda) << ',' << r.quantity << ',' << fmt17(r.value) << '\n';
  os << "# verdicts\n";
  for (const auto& [name, f] : rep.fits)
    os << "# fit," << name << ",slope=" << fmt17(f.slope) << ",intercept=" << fmt17(f.intercept)
       << ",stderr=" << fmt17(f.slope_stderr) << ",r2=" << fmt17(f.r2) << '\n';
  for (const auto& v : rep.verdicts)
    os << "# verdict," << v.name << ',' << (v.passed ? "PASS" : "FAIL") << ",measured=" << fmt17(v.measured) << ','
       << v.comparison << ",threshold=" << fmt17(v.threshold) << ",tolerance=" << fmt17(v.tolerance) << ",\""
       << v.cites << "\"\n";
}

/// Human-readable summary: one line per fit and verdict.
inline std::string report_summary(const ExperimentReport& rep) {
  std::ostringstream os;
  os << rep.experiment << " (d=" << rep.d << ", k=" << rep.k << ", p=" << format_exponent(rep.p) << ", " << rep.tag
     << "): " << (rep.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& [name, f] : rep.fits)
    if (name.find(":draw") == std::string::npos)
      os << "  fit " << name << ": slope " << fmt17(f.slope) << " +- " << fmt17(f.slope_stderr) << ", r2 " << fmt17(f.r2)
         << '\n';
  for (const auto& v : rep.verdicts) {
    os << "  [" << (v.passed ? "PASS" : "FAIL") << "] " << v.name << ": " << fmt17(v.measured) << ' ' << v.comparison
       << ' ' << fmt17(v.threshold);
    if (v.tolerance != 0.0) os << " (tol " << fmt17(v.tolerance) << ')';
    os << " -- " << v.cites << '\n';
  }
  return os.str();
}

/// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.txt`; returns the CSV path.
inline std::filesystem::path save_report(const std::filesystem::path& dir, const ExperimentReport& rep) {
  std::filesystem::create_directories(dir);
  const auto csv = dir / (rep.file_stem() + ".csv");
  std::ofstream os(csv);
  if (!os) throw std::runtime_error("cannot write " + csv.string());
  write_report_csv(os, rep);
  std::ofstream txt(dir / (rep.file_stem() + ".txt"));
  txt << report_summary(rep);
  return csv;
}

/// Data rows of a report CSV (comment lines and the header skipped).
inline std::vector<CsvRow> read_report_rows(std::istream& is) {
  std::vector<CsvRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("l,lambda", 0) == 0) continue;
    std::stringstream ss(line);
    std::string l, lam, q, v;
    std::getline(ss, l, ',');
    std::getline(ss, lam, ',');
    std::getline(ss, q, ',');
    std::getline(ss, v, ',');
    rows.push_back({std::stoi(l), parse_double(lam), q, parse_double(v)});
  }
  return rows;
}

}  // namespace eigrestrict
