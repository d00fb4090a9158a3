#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "varode/error.hpp"
#include "varode/types.hpp"

namespace varode {

void check_dimension(Eigen::Index n);

/// Induced 1-norm (maximum absolute column sum).
template <typename Derived>
double norm1(const Eigen::MatrixBase<Derived>& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

/// Matrix exponential by scaling and squaring around a degree-13 Pade
/// approximant (Higham 2005 coefficients and threshold).
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& A_in) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  const Plain A = A_in;
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("expm: matrix must be square");
  const Plain I = Plain::Identity(n, n);

  static constexpr std::array<double, 14> b = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                               670442572800.0,      33522128640.0,       1323241920.0,
                                               40840800.0,          960960.0,            16380.0,
                                               182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double nrm = norm1(A);
  if (nrm == 0.0) return I;
  int s = 0;
  if (nrm > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  const Plain As = A / Scalar(std::ldexp(1.0, s));

  const Plain A2 = As * As;
  const Plain A4 = A2 * A2;
  const Plain A6 = A4 * A2;
  const Plain U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const Plain V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  Plain R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

/// Sum over k of coeff(k) * A^k. Stops once two consecutive terms are below
/// `rel_tol` of the running sum, or as soon as a power of A is exactly zero.
/// Intended for coefficient sequences that decay factorially.
template <typename Derived>
typename Derived::PlainObject entire_series(const Eigen::MatrixBase<Derived>& A_in,
                                            const std::function<typename Derived::Scalar(int)>& coeff,
                                            int max_terms = 400, double rel_tol = 1e-14) {
  using Plain = typename Derived::PlainObject;
  const Plain A = A_in;
  const Eigen::Index n = A.rows();
  Plain power = Plain::Identity(n, n);
  Plain sum = Plain::Zero(n, n);
  int small_in_a_row = 0;
  for (int k = 0; k < max_terms; ++k) {
    if (k > 0) power = power * A;
    if (power.isZero(0.0)) return sum;
    const Plain term = coeff(k) * power;
    sum += term;
    const double t = term.cwiseAbs().maxCoeff();
    const double s = sum.cwiseAbs().maxCoeff();
    if (t <= rel_tol * s) {
      if (++small_in_a_row >= 2) return sum;
    } else {
      small_in_a_row = 0;
    }
  }
  throw NonConvergenceError("entire_series: tail bound not reached within " + std::to_string(max_terms) + " terms");
}

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // column k pairs with values(k)
};

/// Eigen-decomposition of a Hermitian matrix. Rejects input whose
/// anti-Hermitian part exceeds `tol` (relative to max(1, |H|)).
HermitianEigen eig_hermitian(const CMatrix& H, double tol = 1e-12);

/// Right eigenvector and left covector of a diagonalizable matrix, with the
/// pairing <left|right> = left^T right = 1 (no complex conjugation).
struct EigenTriple {
  cplx value;
  CVector right;
  CVector left;
};

/// Biorthogonal eigen-system. Left covectors are the rows of V^-1, so the
/// closure sum_n |n><n| = I holds by construction. Eigenvalues are returned
/// sorted by (real, imag). Throws DefectiveMatrixError if two eigenvalues are
/// closer than `min_separation` (relative to max(1, |M|)) or V is singular.
std::vector<EigenTriple> eig_general(const CMatrix& M, double min_separation = 1e-10);

/// sum_n lambda_n |n><n|, the reconstruction used to validate eig_general.
CMatrix reconstruct(const std::vector<EigenTriple>& triples);

}  // namespace varode
