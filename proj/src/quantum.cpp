#include "varode/quantum.hpp"

#include <cmath>
#include <string>

#include "varode/error.hpp"
#include "varode/linalg.hpp"
#include "varode/oracle.hpp"
#include "varode/quadrature.hpp"
#include "varode/spectral.hpp"

namespace varode {

namespace {

const cplx I{0.0, 1.0};

// Instantaneous eigen-system on the quadrature grid u_j = j h.
struct Frames {
  double h = 0.0;
  std::vector<double> u;
  std::vector<std::vector<double>> energy;  // [n][j]
  std::vector<CMatrix> vectors;             // [j], column n is |n(u_j)>
  double max_diagonal = 0.0;
};

void fix_gauge(CMatrix& V, Gauge gauge) {
  const Eigen::Index n = V.rows();
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index r = gauge == Gauge::FirstComponent ? k : n - 1 - k;
      const cplx x = V(r, c);
      if (std::abs(x) > 1e-8) {
        V.col(c) *= std::conj(x) / std::abs(x);
        break;
      }
    }
  }
}

Frames build_frames(const HamiltonianFamily& H, double t, const AdiabaticOptions& options) {
  const int per_unit = options.panels_per_unit > 0 ? options.panels_per_unit : default_panels_per_unit();
  long panels = static_cast<long>(std::ceil(per_unit * std::abs(t)));
  panels = std::max(2L, panels + (panels % 2));
  Frames fr;
  fr.h = t / double(panels);
  fr.energy.assign(static_cast<std::size_t>(H.dim), std::vector<double>(static_cast<std::size_t>(panels + 1)));
  for (long j = 0; j <= panels; ++j) {
    const double u = double(j) * fr.h;
    const HermitianEigen he = eig_hermitian(H.H(u));
    for (Eigen::Index n = 0; n + 1 < he.values.size(); ++n)
      if (he.values(n + 1) - he.values(n) < options.min_gap)
        throw SpectralGapError("spectral gap below " + std::to_string(options.min_gap) + " at t = " + std::to_string(u));
    CMatrix V = he.vectors;
    fix_gauge(V, options.gauge);
    if (j > 0) {
      const CMatrix& P = fr.vectors.back();
      for (Eigen::Index n = 0; n < V.cols(); ++n) {
        const cplx overlap = P.col(n).dot(V.col(n));
        if (overlap.real() < 0.5)
          throw NumericalError("gauge discontinuity in eigenvector " + std::to_string(n) + " at t = " + std::to_string(u));
      }
      // d/dz <n|n> by central difference around the previous node
      if (j > 1) {
        const CMatrix& Q = fr.vectors[fr.vectors.size() - 2];
        for (Eigen::Index n = 0; n < V.cols(); ++n) {
          const double d = (V.col(n).squaredNorm() - Q.col(n).squaredNorm()) / (2.0 * fr.h);
          fr.max_diagonal = std::max(fr.max_diagonal, std::abs(d));
        }
      }
    }
    fr.u.push_back(u);
    for (Eigen::Index n = 0; n < he.values.size(); ++n) fr.energy[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = he.values(n);
    fr.vectors.push_back(std::move(V));
  }
  return fr;
}

void check_state(const HamiltonianFamily& H, const QuantumState& psi0) {
  if (psi0.amplitudes.size() != H.dim) throw std::invalid_argument("state dimension does not match the Hamiltonian");
}

// c_n = <n(0)|psi0>
CVector initial_coefficients(const Frames& fr, const CVector& psi0) { return fr.vectors.front().adjoint() * psi0; }

std::vector<std::vector<double>> phases(const Frames& fr) {
  std::vector<std::vector<double>> out;
  for (const auto& e : fr.energy) out.push_back(cumulative_simpson(e, fr.h));
  return out;
}

// <dn|k> = <n|dH|k> / (E_n - E_k), k != n, in the gauge of V.
CMatrix couplings(const CMatrix& V, const std::vector<double>& E, const CMatrix& dH) {
  const CMatrix G = V.adjoint() * dH * V;
  CMatrix D = CMatrix::Zero(V.cols(), V.cols());
  for (Eigen::Index n = 0; n < V.cols(); ++n)
    for (Eigen::Index k = 0; k < V.cols(); ++k)
      if (k != n) D(k, n) = G(n, k) / (E[static_cast<std::size_t>(n)] - E[static_cast<std::size_t>(k)]);
  return D;
}

}  // namespace

CMatrix HamiltonianFamily::derivative(double t) const {
  if (dH) return dH(t);
  const double e = 1e-5 * std::max(1.0, std::abs(t));
  return (H(t + e) - H(t - e)) / (2.0 * e);
}

HamiltonianFamily landau_zener(double delta, double tau) {
  if (!(tau > 0)) throw ConfigError("hamiltonian.params.tau: must be positive");
  HamiltonianFamily f;
  f.name = "landau-zener";
  f.H = [delta, tau](double t) {
    CMatrix m(2, 2);
    m << t / tau - 1.0, delta, delta, 1.0 - t / tau;
    return m;
  };
  f.dH = [tau](double) {
    CMatrix m(2, 2);
    m << 1.0 / tau, 0.0, 0.0, -1.0 / tau;
    return m;
  };
  return f;
}

HamiltonianFamily diagonal_linear() {
  HamiltonianFamily f;
  f.name = "diagonal-linear";
  f.H = [](double t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = t;
    m(1, 1) = -t;
    return m;
  };
  f.dH = [](double) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
  };
  return f;
}

HamiltonianFamily constant_sigma1() {
  HamiltonianFamily f;
  f.name = "constant-sigma1";
  f.H = [](double) {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
  };
  f.dH = [](double) { return CMatrix(CMatrix::Zero(2, 2)); };
  return f;
}

HamiltonianFamily hamiltonian_from_catalog(const std::string& name, const std::map<std::string, double>& params) {
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError("hamiltonian.params." + key + ": unknown parameter for " + name);
    }
  };
  if (name == "landau-zener") {
    reject_unknown({"delta", "tau"});
    const double delta = params.contains("delta") ? params.at("delta") : 0.5;
    const double tau = params.contains("tau") ? params.at("tau") : 1.0;
    return landau_zener(delta, tau);
  }
  if (name == "diagonal-linear") {
    reject_unknown({});
    return diagonal_linear();
  }
  if (name == "constant-sigma1") {
    reject_unknown({});
    return constant_sigma1();
  }
  throw ConfigError("hamiltonian.name: unknown catalog entry '" + name + "'");
}

QuantumState trotter_propagate(const HamiltonianFamily& H, const QuantumState& psi0, double t, int N) {
  check_state(H, psi0);
  if (N < 1) throw std::invalid_argument("trotter_propagate: N must be >= 1");
  const double dt = t / N;
  CVector psi = psi0.amplitudes;
  for (int j = 1; j <= N; ++j) {
    const HermitianEigen he = eig_hermitian(H.H(psi0.time + j * dt));
    CVector phase(he.values.size());
    for (Eigen::Index n = 0; n < he.values.size(); ++n) phase(n) = std::exp(-I * dt * he.values(n));
    psi = he.vectors * phase.asDiagonal() * (he.vectors.adjoint() * psi);
  }
  return {psi, psi0.time + t};
}

QuantumState adiabatic_approx(const HamiltonianFamily& H, const QuantumState& psi0, double t,
                              const AdiabaticOptions& options) {
  check_state(H, psi0);
  const Frames fr = build_frames(H, t, options);
  const CVector c = initial_coefficients(fr, psi0.amplitudes);
  const auto theta = phases(fr);
  CVector psi = CVector::Zero(H.dim);
  for (int n = 0; n < H.dim; ++n)
    psi += c(n) * std::exp(-I * theta[static_cast<std::size_t>(n)].back()) * fr.vectors.back().col(n);
  return {psi, t};
}

AdiabaticCorrection adiabatic_correction(const HamiltonianFamily& H, const QuantumState& psi0, double t,
                                         const AdiabaticOptions& options) {
  check_state(H, psi0);
  const Frames fr = build_frames(H, t, options);
  const CVector c = initial_coefficients(fr, psi0.amplitudes);
  const auto theta = phases(fr);
  const std::size_t nodes = fr.u.size();
  const int dim = H.dim;

  std::vector<CMatrix> D(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    std::vector<double> E(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) E[static_cast<std::size_t>(n)] = fr.energy[static_cast<std::size_t>(n)][j];
    D[j] = couplings(fr.vectors[j], E, H.derivative(fr.u[j]));
  }

  std::vector<CVector> first(nodes, CVector::Zero(dim)), second(nodes, CVector::Zero(dim));
  for (int n = 0; n < dim; ++n) {
    const auto& th_n = theta[static_cast<std::size_t>(n)];
    const auto& E_n = fr.energy[static_cast<std::size_t>(n)];
    std::vector<cplx> inner(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < dim; ++k)
        if (k != n) s += c(k) * D[j](k, n) * std::exp(-I * (theta[static_cast<std::size_t>(k)][j] - th_n[j]));
      inner[j] = s;
    }
    const auto inner_cum = cumulative_simpson(inner, fr.h);
    for (std::size_t j = 0; j < nodes; ++j) {
      const CVector ket = fr.vectors[j].col(n);
      const cplx common = -I * E_n[j] * std::exp(-I * th_n[j]);
      first[j] += common * c(n) * ket;
      second[j] += common * inner_cum[j] * ket;
    }
  }

  AdiabaticCorrection out;
  out.first_order = psi0.amplitudes + cumulative_simpson(first, fr.h).back();
  out.delta = cumulative_simpson(second, fr.h).back();
  out.validity_ratio = out.delta.norm() / out.first_order.norm();
  out.max_diagonal = fr.max_diagonal;
  return out;
}

CMatrix coupling_moduli(const HamiltonianFamily& H, double t, const AdiabaticOptions& options) {
  const HermitianEigen he = eig_hermitian(H.H(t));
  CMatrix V = he.vectors;
  fix_gauge(V, options.gauge);
  std::vector<double> E(he.values.data(), he.values.data() + he.values.size());
  return couplings(V, E, H.derivative(t)).cwiseAbs().cast<cplx>();
}

QuantumState schrodinger_oracle(const HamiltonianFamily& H, const QuantumState& psi0, double t, double rel_tol) {
  check_state(H, psi0);
  const Rhs rhs = [&H](double u, const CVector& y) -> CVector { return -I * (H.H(u) * y); };
  OracleOptions opt;
  opt.rel_tol = rel_tol;
  return {integrate_rhs(rhs, psi0.time, psi0.amplitudes, psi0.time + t, opt).final_state(), psi0.time + t};
}

}  // namespace varode
