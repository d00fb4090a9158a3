#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "varode/types.hpp"

namespace varode {

/// Time-dependent Hermitian generator H(t) of i d/dt psi = H psi.
struct HamiltonianFamily {
  std::string name;
  int dim = 2;
  std::function<CMatrix(double)> H;
  /// dH/dt. Left empty, a central difference of H is used.
  std::function<CMatrix(double)> dH;

  CMatrix derivative(double t) const;
};

/// [[t/tau - 1, delta], [delta, 1 - t/tau]]
HamiltonianFamily landau_zener(double delta = 0.5, double tau = 1.0);
/// diag(t, -t)
HamiltonianFamily diagonal_linear();
/// sigma_1, constant in time.
HamiltonianFamily constant_sigma1();

/// Catalog lookup: "landau-zener" (delta, tau), "diagonal-linear",
/// "constant-sigma1". Unknown names or parameters raise ConfigError.
HamiltonianFamily hamiltonian_from_catalog(const std::string& name, const std::map<std::string, double>& params);

struct QuantumState {
  CVector amplitudes;
  double time = 0.0;
};

/// prod_{j=1..N} exp(-i (t/N) H(j t/N)) psi0, j = 1 applied first. Each factor
/// is exponentiated through the Hermitian eigen-decomposition.
QuantumState trotter_propagate(const HamiltonianFamily& H, const QuantumState& psi0, double t, int N);

/// Deterministic phase convention for instantaneous eigenvectors.
enum class Gauge { FirstComponent, LastComponent };

struct AdiabaticOptions {
  /// Quadrature panels per unit time; 0 means the spectral default.
  int panels_per_unit = 0;
  Gauge gauge = Gauge::FirstComponent;
  double min_gap = 1e-8;
};

/// sum_n c_n exp(-i int_0^t E_n) |n(t)>, c_n = <n(0)|psi0>.
QuantumState adiabatic_approx(const HamiltonianFamily& H, const QuantumState& psi0, double t,
                              const AdiabaticOptions& options = {});

struct AdiabaticCorrection {
  /// psi0 + sum_n int_0^t -i E_n c_n exp(-i Theta_n) |n(u)> du
  CVector first_order;
  /// Transition correction added to first_order.
  CVector delta;
  /// |delta| / |first_order|
  double validity_ratio = 0.0;
  /// Largest |d/dz <n|n>| seen along the grid.
  double max_diagonal = 0.0;
  CVector corrected() const { return first_order + delta; }
};

/// Transition correction driven by the couplings <dn/dz | k> for k != n,
/// computed as <n|dH|k> / (E_n - E_k).
AdiabaticCorrection adiabatic_correction(const HamiltonianFamily& H, const QuantumState& psi0, double t,
                                         const AdiabaticOptions& options = {});

/// |<dn/dt | k>| at time t, a gauge-independent view of the couplings.
CMatrix coupling_moduli(const HamiltonianFamily& H, double t, const AdiabaticOptions& options = {});

/// Reference solution by the oracle on the column system -i H(t).
QuantumState schrodinger_oracle(const HamiltonianFamily& H, const QuantumState& psi0, double t, double rel_tol = 1e-12);

}  // namespace varode
