#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "varode/matform.hpp"
#include "varode/types.hpp"

namespace varode {

using Rhs = std::function<CVector(double, const CVector&)>;

struct OracleOptions {
  double rel_tol = 1e-10;
  /// Absolute floor of the error scale; negative means "same as rel_tol".
  double abs_tol = -1.0;
  double initial_step = 0.0;  // 0 = automatic
  long max_steps = 2'000'000;
  /// Disable adaptivity and take steps of this size (used for order checks).
  std::optional<double> fixed_step;
};

/// Accepted steps of an adaptive integration, with dense output.
class Trajectory {
 public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<CVector>& states() const { return states_; }
  /// Normalized local error (estimate / tolerance) of each accepted step.
  const std::vector<double>& local_errors() const { return errors_; }
  long accepted() const { return accepted_; }
  long rejected() const { return rejected_; }

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const CVector& final_state() const { return states_.back(); }

  /// Cubic Hermite interpolation between the bracketing accepted steps.
  CVector at(double t) const;

 private:
  friend Trajectory integrate_rhs(const Rhs&, double, const CVector&, double, const OracleOptions&);
  std::vector<double> times_;
  std::vector<CVector> states_;
  std::vector<CVector> derivatives_;
  std::vector<double> errors_;
  long accepted_ = 0;
  long rejected_ = 0;
};

/// Dormand-Prince 5(4) with local extrapolation. Integrates from t0 towards
/// t_end in either direction.
Trajectory integrate_rhs(const Rhs& rhs, double t0, const CVector& y0, double t_end, const OracleOptions& options = {});

/// Linear system Y' = M(t) Y (column) or Y' = Y M(t) (row), from t = 0.
Trajectory integrate(const MatrixFunction& system, Orientation orientation, const CVector& y0, double t_end,
                     const OracleOptions& options = {});

}  // namespace varode
