#pragma once

#include <utility>
#include <vector>

#include "varode/expr.hpp"
#include "varode/linalg.hpp"
#include "varode/matform.hpp"
#include "varode/types.hpp"

namespace varode {

/// Output nodes t_k = k * step for every integer k with lo <= t_k <= hi.
/// The range must contain 0, where the initial data live.
struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.01;

  std::vector<double> nodes() const;
  /// Index range [first, last] of k with lo <= k * step <= hi.
  std::pair<long, long> index_range() const;
};

struct SpectralOptions {
  /// Quadrature panels per unit length. Zero means 4096, or the value of the
  /// VARODE_PANELS environment variable when it is set.
  int panels_per_unit = 0;
  /// Largest accepted change between the result and the same computation on a
  /// grid with half the panels, relative to max(1, |value|).
  double convergence_tol = 1e-6;
  Params params;
};

int default_panels_per_unit();

struct ApproxSolution {
  std::vector<double> times;
  /// Complex state per time: (y, y') for the second-order formulas, y alone
  /// for wkb, the full vector for general_first_order.
  std::vector<CVector> values;
  /// Set where the formula is not defined (value is NaN).
  std::vector<bool> divergent;
  /// max |Im y| over the grid.
  double imag_residual = 0.0;
  /// max change against the half-resolution run.
  double refinement_change = 0.0;
  /// Quadrature panels per output cell.
  int panels_per_cell = 0;
  /// max |delta Y| / |Y| (only set by the correction).
  double validity_ratio = 0.0;

  std::vector<double> real_component(int i) const;
};

/// Eigen-system of the companion matrix [[0, 1], [f, 0]] at one time, with
/// lambda = +-sqrt(f) and N = 1 / (sqrt(2) f^(1/4)) on principal branches.
/// First entry is lambda = +sqrt(f).
std::pair<EigenTriple, EigenTriple> companion_eigensystem(const Expr& f, double t, const Params& params = {});

/// First-order spectral solution of y'' = f y with y(0) = a, y'(0) = b.
ApproxSolution approx_first_order(const Expr& f, cplx a, cplx b, const UniformGrid& grid,
                                  const SpectralOptions& options = {});

/// The same solution after integration by parts:
///   y  = f^(-1/4) (A cosh + B sinh) + 1/4 int f' f^(-5/4) (A cosh + B sinh)
///   y' = f^(1/4)  (A sinh + B cosh) - 1/4 int f' f^(-3/4) (A sinh + B cosh)
/// with A = f(0)^(1/4) y(0) and B = y'(0) / f(0)^(1/4).
ApproxSolution approx_wkb_form(const Expr& f, cplx A, cplx B, const UniformGrid& grid,
                               const SpectralOptions& options = {});

/// Classic WKB value (f(0)/f(t))^(1/4) cosh(int_0^t sqrt f) for y(0) = 1,
/// y'(0) = 0. Nodes with |f| < 1e-14 are flagged divergent.
ApproxSolution wkb(const Expr& f, const UniformGrid& grid, const SpectralOptions& options = {});

/// Second-order correction delta Y for y'' = f y with c_n = <n0|Y0>.
/// Nodes where |f| < 1e-12 drop out of the inner integrand.
ApproxSolution correction(const Expr& f, cplx c1, cplx c2, const UniformGrid& grid,
                          const SpectralOptions& options = {});

/// Single-time form of correction.
CVector correction(const Expr& f, cplx c1, cplx c2, double t, const SpectralOptions& options = {});

/// Coefficients c_1, c_2 of the initial state (a, b) in the eigenbasis at t = 0.
std::pair<cplx, cplx> companion_coefficients(const Expr& f, cplx a, cplx b, const Params& params = {});

/// approx_first_order plus correction. validity_ratio carries max |dY|/|Y|.
ApproxSolution approx_corrected(const Expr& f, cplx a, cplx b, const UniformGrid& grid,
                                const SpectralOptions& options = {});

/// First-order spectral solution of a general system Y' = M(t) Y (column) or
/// Y' = Y M(t) (row). Eigenvalues are followed by nearest-neighbour matching;
/// each eigenvector pair is scaled to equal norms and its phase carried by
/// discrete parallel transport.
ApproxSolution general_first_order(const MatrixFunction& system, const CVector& Y0, const UniformGrid& grid,
                                   Orientation orientation = Orientation::Column,
                                   const SpectralOptions& options = {});

}  // namespace varode
