#include "varode/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "varode/error.hpp"

namespace varode {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

CsvTable trajectory_table(const Trajectory& trajectory) {
  CsvTable table;
  table.header.push_back("t");
  const Eigen::Index n = trajectory.states().front().size();
  for (Eigen::Index i = 0; i < n; ++i) {
    table.header.push_back("y" + std::to_string(i) + "_re");
    table.header.push_back("y" + std::to_string(i) + "_im");
  }
  for (std::size_t k = 0; k < trajectory.times().size(); ++k) {
    std::vector<double> row{trajectory.times()[k]};
    for (const cplx& v : trajectory.states()[k]) {
      row.push_back(v.real());
      row.push_back(v.imag());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("--out: cannot open '" + path + "' for writing");
  write_csv(out, table);
  if (!out) throw ConfigError("--out: write to '" + path + "' failed");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(path + ": expected a number or [re, im]");
}

CVector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

PolyMatrixc polymatrix_from_json(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"n", "orientation", "entries"}, path);
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError(path + ".n: expected an integer");
  const int n = j["n"].get<int>();
  if (n < 1 || n > kMaxDim) throw ConfigError(path + ".n: dimension must be in 1.." + std::to_string(kMaxDim));
  Orientation o = Orientation::Row;
  if (j.contains("orientation")) {
    const auto& s = j["orientation"];
    if (s == "row")
      o = Orientation::Row;
    else if (s == "column")
      o = Orientation::Column;
    else
      throw ConfigError(path + ".orientation: expected \"row\" or \"column\"");
  }
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != static_cast<std::size_t>(n))
    throw ConfigError(path + ".entries: expected " + std::to_string(n) + " rows");

  std::vector<CMatrix> coeffs;
  for (int r = 0; r < n; ++r) {
    const auto& row = j["entries"][static_cast<std::size_t>(r)];
    const std::string rpath = path + ".entries[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw ConfigError(rpath + ": expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      const std::string epath = rpath + "[" + std::to_string(c) + "]";
      if (!e.is_array()) throw ConfigError(epath + ": expected a coefficient list");
      if (e.size() > static_cast<std::size_t>(PolyMatrixc::kMaxDegree + 1))
        throw ConfigError(epath + ": degree exceeds " + std::to_string(PolyMatrixc::kMaxDegree));
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (coeffs.size() <= k) coeffs.resize(k + 1, CMatrix::Zero(n, n));
        coeffs[k](r, c) = complex_from_json(e[k], epath + "[" + std::to_string(k) + "]");
      }
    }
  }
  if (coeffs.empty()) coeffs.push_back(CMatrix::Zero(n, n));
  return PolyMatrixc(std::move(coeffs), o);
}

json polymatrix_to_json(const PolyMatrixc& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.dim(); ++c) {
      json e = json::array();
      for (int k = 0; k <= m.degree(); ++k) {
        const cplx v = m.coefficient(k)(r, c);
        e.push_back(json::array({v.real(), v.imag()}));
      }
      row.push_back(e);
    }
    entries.push_back(row);
  }
  return {{"n", m.dim()}, {"orientation", to_string(m.orientation())}, {"entries", entries}};
}

}  // namespace varode
