#include "varode/app.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "varode/eigenproblem.hpp"
#include "varode/error.hpp"
#include "varode/exact.hpp"
#include "varode/expr.hpp"
#include "varode/oracle.hpp"
#include "varode/quantum.hpp"
#include "varode/spectral.hpp"

namespace varode {

using nlohmann::json;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Dense oracle solution on [lo, hi] through t = 0.
class TwoSidedOracle {
 public:
  TwoSidedOracle(const Rhs& rhs, const CVector& y0, double lo, double hi, const OracleOptions& opt)
      : y0_(y0) {
    if (hi > 0) forward_ = integrate_rhs(rhs, 0.0, y0, hi, opt);
    if (lo < 0) backward_ = integrate_rhs(rhs, 0.0, y0, lo, opt);
  }
  CVector at(double t) const {
    if (t > 0) return forward_->at(t);
    if (t < 0) return backward_->at(t);
    return y0_;
  }

 private:
  CVector y0_;
  std::optional<Trajectory> forward_, backward_;
};

Rhs column_rhs(std::function<CMatrix(double)> M) {
  return [M = std::move(M)](double t, const CVector& y) -> CVector { return M(t) * y; };
}

Rhs second_order_rhs(const Expr& f, const Params& params) {
  return [f, params](double t, const CVector& y) -> CVector {
    CVector d(2);
    d << y(1), eval(f, cplx(t), params) * y(0);
    return d;
  };
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return j[key].get<double>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

std::vector<std::string> get_methods(const json& j, const std::vector<std::string>& allowed,
                                     const std::vector<std::string>& fallback) {
  if (!j.contains("methods")) return fallback;
  if (!j["methods"].is_array()) throw ConfigError("methods: expected an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j["methods"].size(); ++i) {
    const auto& m = j["methods"][i];
    const std::string path = "methods[" + std::to_string(i) + "]";
    if (!m.is_string()) throw ConfigError(path + ": expected a string");
    const std::string name = m.get<std::string>();
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == name;
    if (!ok) throw ConfigError(path + ": unknown method '" + name + "'");
    out.push_back(name);
  }
  return out;
}

bool get_flag(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ConfigError(key + ": expected true or false");
  return j[key].get<bool>();
}

std::string column_name(const std::string& method) {
  std::string s = method;
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

Params get_params(const json& j) {
  Params p;
  if (!j.contains("params")) return p;
  if (!j["params"].is_object()) throw ConfigError("params: expected an object");
  for (const auto& [key, value] : j["params"].items()) p[key] = complex_from_json(value, "params." + key);
  return p;
}

Expr get_expr(const json& j, const std::string& path, const Params& params) {
  if (!j.is_string()) throw ConfigError(path + ": expected an expression string");
  std::set<std::string, std::less<>> names;
  for (const auto& [k, v] : params) names.insert(k);
  try {
    return parse(j.get<std::string>(), names);
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

UniformGrid get_grid(const json& j) {
  if (!j.contains("grid")) throw ConfigError("grid: required");
  const json& g = j["grid"];
  reject_unknown_keys(g, {"lo", "hi", "step"}, "grid");
  UniformGrid grid{get_number(g, "lo", "grid", 0.0), get_number(g, "hi", "grid", 1.0), get_number(g, "step", "grid", 0.01)};
  if (!(grid.step > 0)) throw ConfigError("grid.step: must be positive");
  if (grid.lo > 0 || grid.hi < 0 || grid.lo >= grid.hi) throw ConfigError("grid: need lo <= 0 <= hi and lo < hi");
  return grid;
}

struct Tolerances {
  OracleOptions oracle;
  SpectralOptions spectral;
};

Tolerances get_tolerances(const json& j) {
  Tolerances t;
  t.oracle.rel_tol = 1e-11;
  if (!j.contains("tolerances")) return t;
  const json& tj = j["tolerances"];
  reject_unknown_keys(tj, {"oracle_rel_tol", "panels_per_unit", "convergence_tol"}, "tolerances");
  t.oracle.rel_tol = get_number(tj, "oracle_rel_tol", "tolerances", 1e-11);
  if (!(t.oracle.rel_tol >= 1e-13)) throw ConfigError("tolerances.oracle_rel_tol: must be >= 1e-13");
  const double panels = get_number(tj, "panels_per_unit", "tolerances", 0.0);
  if (panels < 0 || panels > 1e7) throw ConfigError("tolerances.panels_per_unit: must be in [0, 1e7]");
  t.spectral.panels_per_unit = static_cast<int>(panels);
  t.spectral.convergence_tol = get_number(tj, "convergence_tol", "tolerances", 1e-6);
  return t;
}

CsvTable solve_scalar(const json& j) {
  reject_unknown_keys(j, {"kind", "f", "coefficients", "params", "initial", "grid", "methods", "oracle", "tolerances"}, "");
  const Params params = get_params(j);
  const UniformGrid grid = get_grid(j);
  Tolerances tol = get_tolerances(j);
  tol.spectral.params = params;
  const bool with_oracle = get_flag(j, "oracle", true);
  if (!j.contains("initial")) throw ConfigError("initial: required");
  const CVector initial = vector_from_json(j["initial"], "initial");

  ScalarODE ode;
  std::optional<Expr> f;
  if (j.contains("f") == j.contains("coefficients")) throw ConfigError("f: give exactly one of f or coefficients");
  if (j.contains("f")) {
    f = get_expr(j["f"], "f", params);
    if (initial.size() != 2) throw ConfigError("initial: y'' = f y needs [y(0), y'(0)]");
    ode = ScalarODE::second_order(*f, initial(0), initial(1));
  } else {
    const json& c = j["coefficients"];
    if (!c.is_array() || c.empty() || c.size() > static_cast<std::size_t>(kMaxDim))
      throw ConfigError("coefficients: expected 1.." + std::to_string(kMaxDim) + " expression strings");
    for (std::size_t i = 0; i < c.size(); ++i)
      ode.coefficients.push_back(get_expr(c[i], "coefficients[" + std::to_string(i) + "]", params));
    if (initial.size() != ode.order()) throw ConfigError("initial: length must equal the equation order");
    ode.initial = initial;
  }

  const std::vector<std::string> second_order_methods{"first-order", "corrected", "wkb-form", "wkb", "general"};
  const std::vector<std::string> any_order_methods{"general"};
  const auto methods = get_methods(j, f ? second_order_methods : any_order_methods, {f ? "first-order" : "general"});

  const CompanionSystem system = to_companion(ode, Orientation::Column, params);
  CsvTable table;
  table.header.push_back("t");
  std::vector<std::vector<double>> columns;

  if (with_oracle) {
    const MatrixFunction M = system.as_function();
    const TwoSidedOracle oracle(column_rhs(M), initial, grid.lo, grid.hi, tol.oracle);
    std::vector<double> col;
    for (double t : grid.nodes()) col.push_back(oracle.at(t)(0).real());
    table.header.push_back("y_oracle");
    columns.push_back(std::move(col));
  }
  for (const auto& m : methods) {
    ApproxSolution sol;
    if (m == "first-order") {
      sol = approx_first_order(*f, initial(0), initial(1), grid, tol.spectral);
    } else if (m == "corrected") {
      sol = approx_corrected(*f, initial(0), initial(1), grid, tol.spectral);
    } else if (m == "wkb-form") {
      const cplx q0 = std::sqrt(std::sqrt(eval(*f, cplx(0.0), params)));
      sol = approx_wkb_form(*f, q0 * initial(0), initial(1) / q0, grid, tol.spectral);
    } else if (m == "wkb") {
      sol = wkb(*f, grid, tol.spectral);
    } else {
      sol = general_first_order(system.as_function(), initial, grid, Orientation::Column, tol.spectral);
    }
    std::vector<double> col = sol.real_component(0);
    for (std::size_t k = 0; k < col.size(); ++k)
      if (sol.divergent[k]) col[k] = kNaN;
    table.header.push_back("y_" + column_name(m));
    columns.push_back(std::move(col));
  }
  const auto nodes = grid.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<double> row{nodes[k]};
    for (const auto& c : columns) row.push_back(c[k]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable solve_system(const json& j) {
  reject_unknown_keys(j, {"kind", "matrix", "initial", "grid", "methods", "oracle", "tolerances"}, "");
  if (!j.contains("matrix")) throw ConfigError("matrix: required");
  const PolyMatrixc M = polymatrix_from_json(j["matrix"], "matrix");
  const UniformGrid grid = get_grid(j);
  const Tolerances tol = get_tolerances(j);
  const bool with_oracle = get_flag(j, "oracle", true);
  if (!j.contains("initial")) throw ConfigError("initial: required");
  const CVector Y0 = vector_from_json(j["initial"], "initial");
  if (Y0.size() != M.dim()) throw ConfigError("initial: length must equal matrix.n");
  const auto methods = get_methods(j, {"exact-class", "taylor", "constant", "general"}, {"exact-class"});
  const auto nodes = grid.nodes();
  const Eigen::Index n = M.dim();

  // Column form of the system for the oracle and the spectral method.
  const PolyMatrixc Mc = M.orientation() == Orientation::Column ? M : M.transpose();
  const MatrixFunction column_system = [Mc](double t) { return Mc(cplx(t)); };

  CsvTable table;
  table.header.push_back("t");
  std::vector<std::vector<CVector>> columns;
  auto add = [&](const std::string& name, std::vector<CVector> values) {
    for (Eigen::Index i = 0; i < n; ++i) {
      table.header.push_back("y" + std::to_string(i) + "_" + name + "_re");
      table.header.push_back("y" + std::to_string(i) + "_" + name + "_im");
    }
    columns.push_back(std::move(values));
  };

  if (with_oracle) {
    const TwoSidedOracle oracle(column_rhs(column_system), Y0, grid.lo, grid.hi, tol.oracle);
    std::vector<CVector> v;
    for (double t : nodes) v.push_back(oracle.at(t));
    add("oracle", std::move(v));
  }
  for (const auto& m : methods) {
    std::vector<CVector> v;
    if (m == "exact-class") {
      const ClassReport report = classify(M);
      for (double t : nodes) {
        switch (report.tag) {
          case MatrixClass::Constant: v.push_back(solve_constant(M.coefficient(0), Y0, t, M.orientation())); break;
          case MatrixClass::Linear: v.push_back(solve_linear_class(M, Y0, t)); break;
          case MatrixClass::Cubic: v.push_back(solve_cubic_class(M, Y0, t)); break;
          case MatrixClass::None: throw NumericalError("exact-class: the matrix is in no exactly solvable class");
        }
      }
    } else if (m == "taylor") {
      for (double t : nodes) v.push_back(taylor_solve(M, Y0, t).value);
    } else if (m == "constant") {
      if (M.degree() != 0) throw ConfigError("methods: 'constant' needs a constant matrix");
      for (double t : nodes) v.push_back(solve_constant(M.coefficient(0), Y0, t, M.orientation()));
    } else {
      v = general_first_order(column_system, Y0, grid, Orientation::Column, tol.spectral).values;
    }
    add(column_name(m), std::move(v));
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<double> row{nodes[k]};
    for (const auto& c : columns)
      for (Eigen::Index i = 0; i < n; ++i) {
        row.push_back(c[k](i).real());
        row.push_back(c[k](i).imag());
      }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable solve_eigen(const json& j) {
  reject_unknown_keys(j, {"kind", "boundary", "range", "scan_step", "tol", "methods"}, "");
  BoundarySpec spec;
  try {
    spec = boundary_from_string(get_string(j, "boundary", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("boundary: ") + e.what());
  }
  double lo = 1.0, hi = default_upper_bound(spec);
  if (j.contains("range")) {
    const json& r = j["range"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
      throw ConfigError("range: expected [lo, hi]");
    lo = r[0].get<double>();
    hi = r[1].get<double>();
    if (!(lo > 0) || !(hi > lo)) throw ConfigError("range: need 0 < lo < hi");
  }
  const double step = get_number(j, "scan_step", "", 0.5);
  const double tol = get_number(j, "tol", "", 1e-6);
  if (!(step > 0)) throw ConfigError("scan_step: must be positive");
  if (!(tol > 0)) throw ConfigError("tol: must be positive");
  const auto methods = get_methods(j, {"shooting", "characteristic", "wkb"}, {"shooting", "characteristic"});

  CsvTable table;
  table.header.push_back("n");
  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;
  for (const auto& m : methods) {
    std::vector<double> col;
    if (m == "shooting") {
      col = shoot_exact(spec, lo, hi, step, tol);
    } else if (m == "characteristic") {
      col = find_roots([spec](double l) { return characteristic(spec, l); }, lo, hi, step, tol);
    } else {
      if (spec != BoundarySpec::Dirichlet) throw ConfigError("methods: 'wkb' applies to the dirichlet family only");
      for (int n = 1; wkb_eigen(n) <= hi; ++n)
        if (wkb_eigen(n) > lo) col.push_back(wkb_eigen(n));
    }
    rows = std::max(rows, col.size());
    table.header.push_back("lambda_" + m);
    columns.push_back(std::move(col));
  }
  for (std::size_t k = 0; k < rows; ++k) {
    std::vector<double> row{double(k + 1)};
    for (const auto& c : columns) row.push_back(k < c.size() ? c[k] : kNaN);
    table.rows.push_back(std::move(row));
  }
  return table;
}

struct QuantumSetup {
  HamiltonianFamily H;
  QuantumState psi0;
  double t = 1.0;
  int samples = 20;
  std::vector<int> steps;
  std::vector<std::string> methods;
  bool with_oracle = true;
  AdiabaticOptions adiabatic;
};

QuantumSetup quantum_setup(const json& j) {
  reject_unknown_keys(j, {"kind", "hamiltonian", "psi0", "t", "samples", "trotter_steps", "methods", "oracle",
                          "panels_per_unit"},
                      "");
  QuantumSetup s;
  if (!j.contains("hamiltonian")) throw ConfigError("hamiltonian: required");
  const json& h = j["hamiltonian"];
  reject_unknown_keys(h, {"name", "params"}, "hamiltonian");
  std::map<std::string, double> params;
  if (h.contains("params")) {
    if (!h["params"].is_object()) throw ConfigError("hamiltonian.params: expected an object");
    for (const auto& [key, value] : h["params"].items()) {
      if (!value.is_number()) throw ConfigError("hamiltonian.params." + key + ": expected a number");
      params[key] = value.get<double>();
    }
  }
  s.H = hamiltonian_from_catalog(get_string(h, "name", "hamiltonian"), params);
  if (!j.contains("psi0")) throw ConfigError("psi0: required");
  s.psi0.amplitudes = vector_from_json(j["psi0"], "psi0");
  if (s.psi0.amplitudes.size() != s.H.dim)
    throw ConfigError("psi0: expected " + std::to_string(s.H.dim) + " amplitudes");
  s.t = get_number(j, "t", "", 1.0);
  if (!(s.t > 0)) throw ConfigError("t: must be positive");
  const double samples = get_number(j, "samples", "", 20);
  if (samples < 1 || samples > 100000 || samples != std::floor(samples))
    throw ConfigError("samples: expected an integer in 1..100000");
  s.samples = static_cast<int>(samples);
  s.steps = {256, 512, 1024, 2048, 4096};
  if (j.contains("trotter_steps")) {
    const json& st = j["trotter_steps"];
    if (!st.is_array() || st.empty()) throw ConfigError("trotter_steps: expected a non-empty array");
    s.steps.clear();
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (!st[i].is_number_integer() || st[i].get<long>() < 1 || st[i].get<long>() > 100'000'000)
        throw ConfigError("trotter_steps[" + std::to_string(i) + "]: expected a positive integer");
      s.steps.push_back(st[i].get<int>());
    }
  }
  s.methods = get_methods(j, {"trotter", "adiabatic"}, {"trotter"});
  s.with_oracle = get_flag(j, "oracle", true);
  const double panels = get_number(j, "panels_per_unit", "", 0.0);
  if (panels < 0 || panels > 1e7) throw ConfigError("panels_per_unit: must be in [0, 1e7]");
  s.adiabatic.panels_per_unit = static_cast<int>(panels);
  return s;
}

CsvTable quantum_amplitudes(const QuantumSetup& s) {
  CsvTable table;
  table.header.push_back("t");
  auto add = [&](const std::string& name) {
    for (int i = 0; i < s.H.dim; ++i) {
      table.header.push_back("psi" + std::to_string(i) + "_" + name + "_re");
      table.header.push_back("psi" + std::to_string(i) + "_" + name + "_im");
    }
  };
  if (s.with_oracle) add("oracle");
  for (const auto& m : s.methods) add(m);
  const int N = *std::max_element(s.steps.begin(), s.steps.end());

  for (int k = 0; k <= s.samples; ++k) {
    const double t = s.t * k / s.samples;
    std::vector<double> row{t};
    auto push = [&](const CVector& v) {
      for (int i = 0; i < s.H.dim; ++i) {
        row.push_back(v(i).real());
        row.push_back(v(i).imag());
      }
    };
    if (s.with_oracle) push(k == 0 ? s.psi0.amplitudes : schrodinger_oracle(s.H, s.psi0, t).amplitudes);
    for (const auto& m : s.methods) {
      if (k == 0)
        push(s.psi0.amplitudes);
      else if (m == "trotter")
        push(trotter_propagate(s.H, s.psi0, t, std::max(1, static_cast<int>(std::lround(double(N) * k / s.samples)))).amplitudes);
      else
        push(adiabatic_approx(s.H, s.psi0, t, s.adiabatic).amplitudes);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

CsvTable run_table(int id) {
  if (id < 1 || id > 3) throw ConfigError("--id: table id must be 1, 2 or 3");
  const BoundarySpec spec = id == 1 ? BoundarySpec::Dirichlet : id == 2 ? BoundarySpec::Symmetric : BoundarySpec::Mixed;
  CsvTable table;
  table.header = {"n", "lambda_exact", "lambda_approx", "rel_error_percent"};
  if (id == 1) {
    table.header.push_back("lambda_wkb");
    table.header.push_back("wkb_error_percent");
  }
  for (const auto& r : eigen_table(spec)) {
    std::vector<double> row{double(r.n), r.lambda_exact, r.lambda_approx, 100.0 * r.rel_error};
    if (id == 1) {
      row.push_back(*r.lambda_wkb);
      row.push_back(100.0 * *r.wkb_rel_error);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable run_figure(int id) {
  if (id < 1 || id > 4) throw ConfigError("--id: figure id must be 1, 2, 3 or 4");
  OracleOptions opt;
  opt.rel_tol = 1e-11;
  CVector y0(2);
  y0 << 1.0, 0.0;
  CsvTable table;
  if (id <= 2) {
    const Expr f = parse("-sqrt(t+1)");
    const UniformGrid grid{0.0, 6.0, 0.01};
    const TwoSidedOracle oracle(second_order_rhs(f, {}), y0, grid.lo, grid.hi, opt);
    const ApproxSolution first = approx_first_order(f, 1.0, 0.0, grid);
    const ApproxSolution corrected = approx_corrected(f, 1.0, 0.0, grid);
    table.header = {"t", "y_oracle", "y_first_order", "y_corrected"};
    for (std::size_t k = 0; k < first.times.size(); ++k) {
      const double t = first.times[k];
      table.rows.push_back({t, oracle.at(t)(0).real(), first.values[k](0).real(), corrected.values[k](0).real()});
    }
  } else {
    const Expr f = parse("-cos(t)^2");
    const UniformGrid grid{-4.0, 4.0, std::numbers::pi / 200.0};
    const TwoSidedOracle oracle(second_order_rhs(f, {}), y0, grid.lo, grid.hi, opt);
    const ApproxSolution first = approx_first_order(f, 1.0, 0.0, grid);
    const ApproxSolution w = wkb(f, grid);
    table.header = {"t", "y_oracle", "y_first_order", "y_wkb"};
    for (std::size_t k = 0; k < first.times.size(); ++k) {
      const double t = first.times[k];
      table.rows.push_back({t, oracle.at(t)(0).real(), first.values[k](0).real(),
                            w.divergent[k] ? kNaN : w.values[k](0).real()});
    }
  }
  return table;
}

CsvTable run_solve(const json& config) {
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  const std::string kind = get_string(config, "kind", "config");
  if (kind == "scalar-ode") return solve_scalar(config);
  if (kind == "system") return solve_system(config);
  if (kind == "eigen") return solve_eigen(config);
  if (kind == "quantum") return quantum_amplitudes(quantum_setup(config));
  throw ConfigError("kind: expected scalar-ode, system, eigen or quantum, got '" + kind + "'");
}

json check_matrix(const json& matrix) {
  const PolyMatrixc M = polymatrix_from_json(matrix, "matrix");
  const ClassReport report = classify(M);
  json residuals = json::object();
  for (const auto& [key, value] : report.residuals) residuals[key] = value;
  return {{"class", to_string(report.tag)},
          {"c", json::array({report.c.real(), report.c.imag()})},
          {"residuals", residuals}};
}

QuantumReport run_quantum(const json& config) {
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  const QuantumSetup s = quantum_setup(config);
  QuantumReport report;
  report.amplitudes = quantum_amplitudes(s);
  report.convergence.header = {"N", "error", "ratio", "norm_defect"};
  const CVector reference = schrodinger_oracle(s.H, s.psi0, s.t).amplitudes;
  double previous = kNaN;
  for (int N : s.steps) {
    const CVector psi = trotter_propagate(s.H, s.psi0, s.t, N).amplitudes;
    const double err = (psi - reference).norm();
    report.convergence.rows.push_back(
        {double(N), err, previous / err, std::abs(psi.norm() - s.psi0.amplitudes.norm())});
    previous = err;
  }
  return report;
}

}  // namespace varode
