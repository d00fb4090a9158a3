#pragma once

#include <json.hpp>

#include "varode/io.hpp"

namespace varode {

/// Eigenvalue tables 1-3: n, lambda_exact, lambda_approx, rel_error_percent
/// (table 1 adds lambda_wkb, wkb_error_percent).
CsvTable run_table(int id);

/// Figures 1-2: y'' = -sqrt(t+1) y on [0, 6], step 0.01, with columns
/// t, y_oracle, y_first_order, y_corrected.
/// Figures 3-4: y'' = -cos(t)^2 y on [-4, 4], step pi/200, with columns
/// t, y_oracle, y_first_order, y_wkb (empty where WKB diverges).
CsvTable run_figure(int id);

/// Solve a problem described by a JSON config (kinds scalar-ode, system,
/// eigen, quantum).
CsvTable run_solve(const nlohmann::json& config);

/// Class report of a polynomial matrix as JSON.
nlohmann::json check_matrix(const nlohmann::json& matrix);

struct QuantumReport {
  CsvTable amplitudes;
  CsvTable convergence;
};

QuantumReport run_quantum(const nlohmann::json& config);

}  // namespace varode
