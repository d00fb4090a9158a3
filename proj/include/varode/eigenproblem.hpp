#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace varode {

/// Boundary conditions for y'' + lambda (1 - t^2) y = 0 on [0, 1].
///   Dirichlet: y(0) = 0, y(1) = 0
///   Symmetric: y even, y(1) = y(0)
///   Mixed:     y(0) = 0, y'(1) = 0
enum class BoundarySpec { Dirichlet, Symmetric, Mixed };

const char* to_string(BoundarySpec b);
BoundarySpec boundary_from_string(const std::string& name);

/// Approximate characteristic functions built from the first-order spectral
/// solution. The phase (u sqrt(1-u^2) + arcsin u) / 2 is used in closed form.
double characteristic_dirichlet(double lambda);
double characteristic_symmetric(double lambda);
double characteristic_mixed(double lambda);
double characteristic(BoundarySpec spec, double lambda);

/// WKB eigenvalue 16 n^2.
double wkb_eigen(int n);

/// Brackets sign changes of F on a scan of [lo, hi] with the given step, then
/// bisects each bracket to width below tol. Roots come back ascending.
std::vector<double> find_roots(const std::function<double(double)>& F, double lo, double hi, double step = 0.5,
                               double tol = 1e-6);

/// Boundary residual of the initial-value problem at lambda, integrated with
/// the oracle (rel_tol 1e-11).
double shooting_residual(BoundarySpec spec, double lambda);

/// Eigenvalues from shooting over (lo, hi].
std::vector<double> shoot_exact(BoundarySpec spec, double lo, double hi, double step = 0.5, double tol = 1e-6);

struct EigenResult {
  int n = 0;
  double lambda_exact = 0.0;
  double lambda_approx = 0.0;
  /// |exact - approx| / exact
  double rel_error = 0.0;
  std::optional<double> lambda_wkb;
  std::optional<double> wkb_rel_error;
};

/// Default scan ranges: Dirichlet and mixed (1, 450], symmetric (1, 550].
double default_upper_bound(BoundarySpec spec);

/// First `count` eigenvalues from both methods, paired by index.
std::vector<EigenResult> eigen_table(BoundarySpec spec, int count = 5);

}  // namespace varode
