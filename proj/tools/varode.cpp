#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varode/app.hpp"
#include "varode/error.hpp"
#include "varode/io.hpp"

namespace {

constexpr int kConfigFailure = 2;
constexpr int kNumericalFailure = 3;

const char* kFooter = R"(Defaults:
  quadrature panels per unit length  4096 (env VARODE_PANELS overrides)
  quadrature convergence tolerance   1e-6 (change on halving the panels)
  oracle relative tolerance          1e-11 (solve, figure), 1e-12 (quantum)
  eigenvalue scan step / bisection   0.5 / 1e-6
  eigenvalue scan ranges             dirichlet, mixed (1, 450]; symmetric (1, 550]
  quantum Trotter steps              256 512 1024 2048 4096; samples 20

Exit codes: 0 success, 2 configuration error, 3 numerical failure.)";

std::string convergence_path(const std::string& out) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + "_convergence" + p.extension().string())).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-series and spectral solvers for linear ODEs with variable coefficients"};
  app.footer(kFooter);
  app.require_subcommand(1);

  int table_id = 0, figure_id = 0;
  std::string out, config, matrix;

  auto* table = app.add_subcommand("table", "Eigenvalue table 1, 2 or 3 as CSV");
  table->add_option("--id", table_id, "Table id (1 dirichlet, 2 symmetric, 3 mixed)")->required();
  table->add_option("--out", out, "Output CSV path")->required();

  auto* figure = app.add_subcommand("figure", "Data behind figure 1, 2, 3 or 4 as CSV");
  figure->add_option("--id", figure_id, "Figure id")->required();
  figure->add_option("--out", out, "Output CSV path")->required();

  auto* solve = app.add_subcommand("solve", "Solve the problem described by a JSON config");
  solve->add_option("--config", config, "JSON problem description")->required();
  solve->add_option("--out", out, "Output CSV path")->required();

  auto* check = app.add_subcommand("check", "Classify a polynomial matrix (JSON) and print the report");
  check->add_option("--matrix", matrix, "JSON matrix description")->required();

  auto* quantum = app.add_subcommand(
      "quantum", "Trotter propagation of a catalog Hamiltonian; also writes <out stem>_convergence.csv");
  quantum->add_option("--config", config, "JSON Hamiltonian description")->required();
  quantum->add_option("--out", out, "Amplitude CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  try {
    if (*table) {
      varode::write_csv(out, varode::run_table(table_id));
    } else if (*figure) {
      varode::write_csv(out, varode::run_figure(figure_id));
    } else if (*solve) {
      varode::write_csv(out, varode::run_solve(varode::read_json_file(config)));
    } else if (*check) {
      std::cout << varode::check_matrix(varode::read_json_file(matrix)).dump(2) << '\n';
    } else if (*quantum) {
      const auto report = varode::run_quantum(varode::read_json_file(config));
      varode::write_csv(out, report.amplitudes);
      varode::write_csv(convergence_path(out), report.convergence);
    }
  } catch (const varode::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const varode::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const varode::EvalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
