#include "varode/exact.hpp"

#include <algorithm>

#include "varode/error.hpp"
#include "varode/linalg.hpp"

namespace varode {

namespace {

// z^k / k!
double power_over_factorial(double z, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= z / j;
  return r;
}

double residual(const PolyMatrixc& p) { return p.max_abs(); }

PolyMatrixc identity_poly(Eigen::Index n, Orientation o) { return PolyMatrixc::constant(CMatrix::Identity(n, n), o); }

// Row-orientation propagator of `M` evaluated through `row_kernel`, with the
// transpose route for column systems.
template <typename Kernel>
CMatrix oriented(const PolyMatrixc& M, Kernel&& row_kernel) {
  if (M.orientation() == Orientation::Row) return row_kernel(M);
  return row_kernel(M.transpose()).transpose();
}

CVector apply(const PolyMatrixc& M, const CMatrix& P, const CVector& Y0) {
  if (Y0.size() != M.dim()) throw std::invalid_argument("initial vector dimension mismatch");
  return M.orientation() == Orientation::Row ? CVector(P.transpose() * Y0) : CVector(P * Y0);
}

}  // namespace

const char* to_string(MatrixClass c) {
  switch (c) {
    case MatrixClass::Constant: return "constant";
    case MatrixClass::Linear: return "linear-class";
    case MatrixClass::Cubic: return "cubic-class";
    case MatrixClass::None: return "none";
  }
  return "none";
}

ClassReport classify(const PolyMatrixc& M, double tol) {
  ClassReport r;
  const Eigen::Index n = M.dim();
  const double scale = std::max(1.0, M.max_abs() * M.max_abs());
  const double limit = tol * scale;

  const PolyMatrixc d1 = M.derivative();
  const PolyMatrixc d2 = d1.derivative();
  const PolyMatrixc d3 = d2.derivative();
  const PolyMatrixc sq = M * M;

  r.c = sq.coefficient(0).trace() / double(n);
  r.residuals["M'"] = residual(d1);
  r.residuals["M^2-cI"] = residual(sq - r.c * identity_poly(n, M.orientation()));
  r.residuals["M''"] = residual(d2);
  r.residuals["M^2"] = residual(sq);
  r.residuals["M'^2"] = residual(d1 * d1);
  r.residuals["M'''"] = residual(d3);

  if (r.residuals["M'"] <= limit)
    r.tag = MatrixClass::Constant;
  else if (r.residuals["M^2-cI"] <= limit && r.residuals["M''"] <= limit)
    r.tag = MatrixClass::Linear;
  else if (r.residuals["M^2"] <= limit && r.residuals["M'^2"] <= limit && r.residuals["M'''"] <= limit)
    r.tag = MatrixClass::Cubic;
  else
    r.tag = MatrixClass::None;
  return r;
}

CVector solve_constant(const CMatrix& M0, const CVector& Y0, double z, Orientation orientation) {
  const CMatrix E = expm(CMatrix(z * M0));
  return orientation == Orientation::Row ? CVector(E.transpose() * Y0) : CVector(E * Y0);
}

CMatrix linear_class_propagator(const PolyMatrixc& M_in, double z) {
  return oriented(M_in, [z](const PolyMatrixc& M) {
    const Eigen::Index n = M.dim();
    const CMatrix M0 = M.coefficient(0);
    const CMatrix A = M.coefficient_or_zero(1) + M0 * M0;
    const CMatrix odd = entire_series(A, std::function<cplx(int)>([z](int k) { return cplx(power_over_factorial(z, 2 * k + 1)); }));
    const CMatrix even = entire_series(A, std::function<cplx(int)>([z](int k) { return cplx(power_over_factorial(z, 2 * k + 2)); }));
    return CMatrix(CMatrix::Identity(n, n) + M0 * odd + A * even);
  });
}

CMatrix linear_class_propagator_sinh_form(const PolyMatrixc& M_in, double z) {
  return oriented(M_in, [z](const PolyMatrixc& M) {
    const CMatrix M0 = M.coefficient(0);
    const CMatrix A = M.coefficient_or_zero(1) + M0 * M0;
    const CMatrix sinh_over_root = entire_series(A, std::function<cplx(int)>([z](int k) { return cplx(power_over_factorial(z, 2 * k + 1)); }));
    const CMatrix cosh_root = entire_series(A, std::function<cplx(int)>([z](int k) { return cplx(power_over_factorial(z, 2 * k)); }));
    return CMatrix(M0 * sinh_over_root + cosh_root);
  });
}

CVector solve_linear_class(const PolyMatrixc& M, const CVector& Y0, double z) {
  const ClassReport report = classify(M);
  if (report.tag != MatrixClass::Linear && report.tag != MatrixClass::Constant)
    throw NumericalError(std::string("solve_linear_class: matrix is ") + to_string(report.tag) +
                         ", not in the linear class");
  return apply(M, linear_class_propagator(M, z), Y0);
}

CMatrix cubic_class_propagator(const PolyMatrixc& M_in, double z) {
  return oriented(M_in, [z](const PolyMatrixc& M) {
    const Eigen::Index n = M.dim();
    const CMatrix M0 = M.coefficient(0);
    const CMatrix D0 = M.coefficient_or_zero(1);
    const CMatrix B = 2.0 * M.coefficient_or_zero(2);
    const CMatrix twoB = 2.0 * B;
    auto series = [&](int r) {
      return entire_series(twoB, std::function<cplx(int)>([z, r](int k) { return cplx(power_over_factorial(z, 3 * k + r)); }),
                           400, 1e-15);
    };
    return CMatrix(CMatrix::Identity(n, n) + M0 * series(1) + D0 * series(2) + (B + M0 * D0) * series(3));
  });
}

CVector solve_cubic_class(const PolyMatrixc& M, const CVector& Y0, double z) {
  const ClassReport report = classify(M);
  if (report.tag != MatrixClass::Cubic)
    throw NumericalError(std::string("solve_cubic_class: matrix is ") + to_string(report.tag) +
                         ", not in the cubic class");
  return apply(M, cubic_class_propagator(M, z), Y0);
}

CMatrix pauli(int i) {
  CMatrix s(2, 2);
  const cplx I{0.0, 1.0};
  switch (i) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return s;
}

CMatrix dirac(int mu) {
  CMatrix g = CMatrix::Zero(4, 4);
  if (mu == 0) {
    g.topLeftCorner(2, 2) = CMatrix::Identity(2, 2);
    g.bottomRightCorner(2, 2) = -CMatrix::Identity(2, 2);
  } else if (mu >= 1 && mu <= 3) {
    g.topRightCorner(2, 2) = pauli(mu);
    g.bottomLeftCorner(2, 2) = -pauli(mu);
  } else {
    throw std::invalid_argument("dirac: index must be 0..3");
  }
  return g;
}

PolyMatrixc pauli_family(cplx p1, cplx p2, cplx q2, cplx q3, Orientation orientation) {
  const cplx p3 = std::sqrt(-(p1 * p1 + p2 * p2));
  const cplx rest = p2 * q2 + p3 * q3;
  cplx q1{};
  if (p1 != cplx{}) {
    q1 = -rest / p1;
  } else if (std::abs(rest) > 1e-14 * std::max(1.0, std::abs(p2) * std::abs(q2) + std::abs(p3) * std::abs(q3))) {
    throw NumericalError("pauli_family: p1 = 0 leaves sum p_i q_i = 0 unsolvable for these parameters");
  }
  const std::array<cplx, 3> p{p1, p2, p3}, q{q1, q2, q3};
  CMatrix slope = CMatrix::Zero(2, 2), offset = CMatrix::Zero(2, 2);
  for (int i = 0; i < 3; ++i) {
    slope += p[static_cast<std::size_t>(i)] * pauli(i + 1);
    offset += q[static_cast<std::size_t>(i)] * pauli(i + 1);
  }
  return PolyMatrixc({offset, slope}, orientation);
}

PolyMatrixc dirac_family(const std::array<cplx, 6>& free, Orientation orientation) {
  const auto [p0, p1, p2, q1, q2, q3] = free;
  const cplx p3 = std::sqrt(p0 * p0 - p1 * p1 - p2 * p2);
  const cplx rest = p1 * q1 + p2 * q2 + p3 * q3;
  cplx q0{};
  if (p0 != cplx{}) {
    q0 = rest / p0;
  } else if (std::abs(rest) > 1e-14 * std::max(1.0, std::abs(p1 * q1) + std::abs(p2 * q2) + std::abs(p3 * q3))) {
    throw NumericalError("dirac_family: p0 = 0 leaves the linear constraint unsolvable for these parameters");
  }
  const std::array<cplx, 4> p{p0, p1, p2, p3}, q{q0, q1, q2, q3};
  CMatrix slope = CMatrix::Zero(4, 4), offset = CMatrix::Zero(4, 4);
  for (int mu = 0; mu < 4; ++mu) {
    slope += p[static_cast<std::size_t>(mu)] * dirac(mu);
    offset += q[static_cast<std::size_t>(mu)] * dirac(mu);
  }
  return PolyMatrixc({offset, slope}, orientation);
}

}  // namespace varode
