#include <doctest.h>

#include <array>
#include <cmath>

#include "support.hpp"
#include "varode/error.hpp"
#include "varode/exact.hpp"
#include "varode/oracle.hpp"

using namespace varode;
using testing::max_abs;

namespace {

const cplx I{0.0, 1.0};

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const CMatrix sigma_plus = mat2(0, 1, 0, 0);

PolyMatrixc cubic_4x4(cplx alpha, cplx beta, cplx gamma, cplx delta, Orientation o = Orientation::Row) {
  const CMatrix N1 = testing::kron(sigma_plus, CMatrix::Identity(2, 2));
  const CMatrix N2 = testing::kron(pauli(3), sigma_plus);
  return PolyMatrixc({alpha * N1 + delta * N2, gamma * N2, beta * N2}, o);
}

PolyMatrixc similar(const PolyMatrixc& M, const CMatrix& S) {
  const CMatrix Si = S.inverse();
  std::vector<CMatrix> c;
  for (const auto& m : M.coefficients()) c.push_back(S * m * Si);
  return PolyMatrixc(c, M.orientation());
}

CVector oracle(const PolyMatrixc& M, const CVector& y0, double z) {
  OracleOptions opt;
  opt.rel_tol = 1e-13;
  const MatrixFunction f = [&M](double t) { return M(cplx(t)); };
  return integrate(f, M.orientation(), y0, z, opt).final_state();
}

}  // namespace

TEST_CASE("classification examples") {
  const auto P = pauli_family(1.0, I, 0.0, 1.0);
  CHECK(max_abs(P.coefficient(1) - (pauli(1) + I * pauli(2))) < 1e-15);
  CHECK(max_abs(P.coefficient(0) - pauli(3)) < 1e-15);
  const auto r = classify(P);
  CHECK(r.tag == MatrixClass::Linear);
  CHECK(std::abs(r.c - 1.0) < 1e-15);

  const auto C = cubic_4x4(1.0, 1.0, 0.0, 0.0);
  CHECK(classify(C).tag == MatrixClass::Cubic);
  CHECK(max_abs(C.derivative().derivative().coefficient(0) - 2.0 * testing::kron(pauli(3), sigma_plus)) == 0.0);

  const PolyMatrixc none({mat2(0, 1, 0, 0), CMatrix::Zero(2, 2), mat2(0, 0, 1, 0)}, Orientation::Row);
  const auto rn = classify(none);
  CHECK(rn.tag == MatrixClass::None);
  CHECK(rn.residuals.at("M^2-cI") > 0.5);

  CHECK(classify(PolyMatrixc::constant(mat2(1, 2, 3, 4))).tag == MatrixClass::Constant);
  CHECK(std::string(to_string(MatrixClass::Linear)) == "linear-class");
}

TEST_CASE("classification does not depend on orientation") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = pauli_family(rng.complex(1), rng.complex(1), rng.complex(1), rng.complex(1));
    CHECK(classify(P).tag == classify(P.with_orientation(Orientation::Column)).tag);
    CHECK(classify(P.transpose()).tag == MatrixClass::Linear);
  }
  const auto C = cubic_4x4(2.0, 1.0, -1.0, 0.5);
  CHECK(classify(C.with_orientation(Orientation::Column)).tag == MatrixClass::Cubic);
}

TEST_CASE("solve_constant") {
  CVector y0(2);
  y0 << 1.0, 0.0;
  CHECK((solve_constant(CMatrix::Zero(2, 2), y0, 3.0) - y0).norm() == 0.0);
  const CVector r = solve_constant(mat2(0, 1, -1, 0), y0, M_PI);
  CHECK(std::abs(r(0) + 1.0) < 1e-14);
  CHECK(std::abs(r(1)) < 1e-14);
  const CVector h = solve_constant(mat2(0, 1, 1, 0), y0, 1.0, Orientation::Column);
  CHECK(std::abs(h(0) - 1.5430806348152437) < 1e-14);
  CHECK(std::abs(h(1) - 1.1752011936438014) < 1e-14);
}

TEST_CASE("linear class reduces to the constant solution") {
  const CMatrix M0 = pauli(1) * 0.7 + pauli(3) * 0.2;
  const auto M = PolyMatrixc::constant(M0);
  CVector y0(2);
  y0 << 0.3, -1.0;
  for (double z : {0.0, 0.5, 2.0}) CHECK((solve_linear_class(M, y0, z) - solve_constant(M0, y0, z)).norm() < 1e-12);
}

TEST_CASE("Pauli-linear example against taylor and oracle") {
  const auto P = pauli_family(1.0, I, 0.0, 1.0);
  CVector y0(2);
  y0 << 1.0, 0.0;
  CHECK((solve_linear_class(P, y0, 0.3) - taylor_solve(P, y0, 0.3).value).norm() < 1e-10);
  CHECK((solve_linear_class(P, y0, 1.0) - oracle(P, y0, 1.0)).norm() < 1e-8);
}

TEST_CASE("random Pauli-linear instances agree three ways") {
  testing::Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Orientation o = trial % 2 ? Orientation::Row : Orientation::Column;
    const auto P = pauli_family(rng.complex(1), rng.complex(1), rng.complex(1), rng.complex(1), o);
    REQUIRE(classify(P).tag == MatrixClass::Linear);
    const CVector y0 = rng.vector(2, 1.0);
    for (double z : {0.25, 0.5, 1.0}) {
      const CVector e = solve_linear_class(P, y0, z);
      const CVector t = taylor_solve(P, y0, z).value;
      const CVector r = oracle(P, y0, z);
      CHECK((e - t).norm() < 1e-8);
      CHECK((e - r).norm() < 1e-8);
      CHECK((t - r).norm() < 1e-8);
    }
  }
}

TEST_CASE("sinh form equals the cosh form when A is invertible") {
  testing::Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = pauli_family(rng.complex(1), rng.complex(1), rng.complex(1), rng.complex(1));
    const CMatrix A = P.coefficient_or_zero(1) + P.coefficient(0) * P.coefficient(0);
    if (std::abs(A.determinant()) < 1e-3) continue;
    for (double z : {0.3, 1.0})
      CHECK(max_abs(linear_class_propagator(P, z) - linear_class_propagator_sinh_form(P, z)) < 1e-12);
  }
}

TEST_CASE("Dirac family is linear-class") {
  testing::Rng rng(44);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const CMatrix anti = dirac(mu) * dirac(nu) + dirac(nu) * dirac(mu);
      const double eta = mu != nu ? 0.0 : mu == 0 ? 2.0 : -2.0;
      CHECK(max_abs(anti - eta * CMatrix::Identity(4, 4)) < 1e-15);
    }
  for (int trial = 0; trial < 5; ++trial) {
    std::array<cplx, 6> p;
    for (auto& v : p) v = rng.complex(1);
    const auto D = dirac_family(p);
    CHECK(classify(D).tag == MatrixClass::Linear);
    const CVector y0 = rng.vector(4, 1.0);
    CHECK((solve_linear_class(D, y0, 0.8) - oracle(D, y0, 0.8)).norm() < 1e-8);
  }
}

TEST_CASE("family constraints") {
  const auto flat = pauli_family(0.0, 0.0, 0.5, 0.25);
  CHECK(flat.degree() == 0);
  CHECK(classify(flat).tag == MatrixClass::Constant);
  CHECK_THROWS_AS(pauli_family(0.0, 1.0, 1.0, 0.0), NumericalError);
  CHECK_NOTHROW(pauli_family(0.0, 1.0, 0.0, 0.0));
}

TEST_CASE("cubic class: nilpotent example") {
  const PolyMatrixc M({CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), sigma_plus}, Orientation::Row);
  REQUIRE(classify(M).tag == MatrixClass::Cubic);
  CVector y0(2);
  y0 << 2.0, 1.0;
  const CVector y = solve_cubic_class(M, y0, 1.5);
  CHECK(std::abs(y(0) - 2.0) < 1e-15);
  CHECK(std::abs(y(1) - (1.0 + 2.0 * std::pow(1.5, 3) / 3.0)) < 1e-14);
}

TEST_CASE("cubic class: 4x4 example against taylor and oracle") {
  const auto M = cubic_4x4(1.0, 1.0, 0.0, 0.0);
  CVector y0 = CVector::Zero(4);
  y0(0) = 1.0;
  CHECK((solve_cubic_class(M, y0, 0.5) - taylor_solve(M, y0, 0.5).value).norm() < 1e-10);
  CHECK((solve_cubic_class(M, y0, 1.0) - oracle(M, y0, 1.0)).norm() < 1e-8);
}

TEST_CASE("cubic class: random instances agree three ways") {
  testing::Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const Orientation o = trial % 2 ? Orientation::Row : Orientation::Column;
    PolyMatrixc M = cubic_4x4(rng.complex(1), rng.complex(1), rng.complex(1), rng.complex(1), o);
    const CMatrix S = CMatrix::Identity(4, 4) + 0.3 * rng.matrix(4, 1.0);
    M = similar(M, S);
    REQUIRE(classify(M).tag == MatrixClass::Cubic);
    const CVector y0 = rng.vector(4, 1.0);
    for (double z : {0.5, 1.0}) {
      const CVector e = solve_cubic_class(M, y0, z);
      CHECK((e - taylor_solve(M, y0, z).value).norm() < 1e-8);
      CHECK((e - oracle(M, y0, z)).norm() < 1e-8);
    }
  }
}

TEST_CASE("solvers refuse matrices outside their class") {
  const auto P = pauli_family(1.0, I, 0.0, 1.0);
  CVector y0 = CVector::Ones(2);
  CHECK_THROWS_AS(solve_cubic_class(P, y0, 0.5), NumericalError);
  CHECK_THROWS_AS(solve_linear_class(cubic_4x4(1.0, 1.0, 0.0, 0.0), CVector::Ones(4), 0.5), NumericalError);
}
