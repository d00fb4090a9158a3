#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "varode/oracle.hpp"
#include "varode/polymat.hpp"

namespace varode {

/// Header plus numeric rows. NaN cells are written empty.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numbers use %.17g so values round-trip exactly.
std::string format_number(double v);
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/// Columns t, y0_re, y0_im, y1_re, ... for every accepted step.
CsvTable trajectory_table(const Trajectory& trajectory);

/// Reads a JSON file; syntax errors become ConfigError.
nlohmann::json read_json_file(const std::string& path);

/// A complex number given as a number or a [re, im] pair.
cplx complex_from_json(const nlohmann::json& j, const std::string& path);
CVector vector_from_json(const nlohmann::json& j, const std::string& path);

/// {"n": 2, "orientation": "row"|"column",
///  "entries": [[e00, e01], [e10, e11]]}
/// Each entry is a list of polynomial coefficients, lowest power first, each
/// coefficient a number or [re, im].
PolyMatrixc polymatrix_from_json(const nlohmann::json& j, const std::string& path = "matrix");
nlohmann::json polymatrix_to_json(const PolyMatrixc& m);

/// Throws ConfigError naming the first key of `j` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& allowed, const std::string& path);

}  // namespace varode
