#pragma once

#include <array>
#include <map>
#include <string>

#include "varode/polymat.hpp"
#include "varode/types.hpp"

namespace varode {

enum class MatrixClass { Constant, Linear, Cubic, None };

const char* to_string(MatrixClass c);

/// Outcome of testing M(z) against the exactly solvable classes.
///
/// Residuals are the largest absolute coefficient of each condition, checked
/// in polynomial arithmetic:
///   "M'"            constant class
///   "M^2-cI", "M''" linear class (c taken from the constant term of M^2)
///   "M^2", "M'^2", "M'''"  cubic class
struct ClassReport {
  MatrixClass tag = MatrixClass::None;
  cplx c{};  // M^2 = c I for the linear class
  std::map<std::string, double> residuals;
};

/// Residuals are compared against tol * max(1, |M|^2), so exact zero is
/// required for integer inputs and rounding is tolerated for float inputs.
ClassReport classify(const PolyMatrixc& M, double tol = 1e-12);

/// Y0 exp(z M0) for a row system, exp(z M0) Y0 for a column system.
CVector solve_constant(const CMatrix& M0, const CVector& Y0, double z, Orientation orientation = Orientation::Row);

/// Propagator P(z) with Y(z) = Y0 P(z) (row) for the class M^2 = cI, M'' = 0:
///   P = I + M0 * sum_n A^n z^(2n+1)/(2n+1)! + sum_n A^(n+1) z^(2n+2)/(2n+2)!
/// where A = M'(0) + M(0)^2 is the square of the matrix the closed form calls
/// A0. Only integer powers of A appear; no matrix root is taken.
CMatrix linear_class_propagator(const PolyMatrixc& M, double z);

/// Same class, in the form M0 A0^-1 sinh(z A0) + cosh(z A0), again written
/// through integer powers of A0^2 (the odd and even series).
CMatrix linear_class_propagator_sinh_form(const PolyMatrixc& M, double z);

CVector solve_linear_class(const PolyMatrixc& M, const CVector& Y0, double z);

/// Propagator for the class M^2 = 0, M'^2 = 0, M'' constant:
///   P = I + sum_n 2^n [ M0 B^n z^(3n+1)/(3n+1)! + M0' B^n z^(3n+2)/(3n+2)!
///                      + (B + M0 M0') B^n z^(3n+3)/(3n+3)! ]
/// with B = M''. Each series is summed to a relative tail below 1e-13.
CMatrix cubic_class_propagator(const PolyMatrixc& M, double z);

CVector solve_cubic_class(const PolyMatrixc& M, const CVector& Y0, double z);

/// Pauli matrices sigma_1..3 (index 0 gives the identity).
CMatrix pauli(int i);

/// Dirac matrices gamma^0..3 in the Dirac representation.
CMatrix dirac(int mu);

/// M(z) = sum_i (p_i z + q_i) sigma_i with M^2 constant.
/// Free parameters are (p1, p2, q2, q3); p3 and q1 are solved from
/// sum p_i^2 = 0 and sum p_i q_i = 0. Throws NumericalError when p1 = 0 and
/// the second constraint cannot be met.
PolyMatrixc pauli_family(cplx p1, cplx p2, cplx q2, cplx q3, Orientation orientation = Orientation::Row);

/// M(z) = sum_mu (p_mu z + q_mu) gamma^mu with M^2 constant (Minkowski
/// metric +---). Free parameters (p0, p1, p2, q1, q2, q3); p3 and q0 are
/// solved from the two constraints.
PolyMatrixc dirac_family(const std::array<cplx, 6>& free, Orientation orientation = Orientation::Row);

}  // namespace varode
