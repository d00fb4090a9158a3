#include <doctest.h>

#include <cmath>

#include "varode/error.hpp"
#include "varode/matform.hpp"
#include "varode/oracle.hpp"

using namespace varode;

namespace {

Trajectory solve_second_order(const std::string& f, double y0, double dy0, double t_end, double rel_tol = 1e-11) {
  const auto sys = to_companion(ScalarODE::second_order(parse(f), y0, dy0), Orientation::Column);
  OracleOptions opt;
  opt.rel_tol = rel_tol;
  return integrate(sys.as_function(), Orientation::Column, sys.initial(), t_end, opt);
}

// Power series of y'' = -sqrt(1+t) y, y(0) = 1, y'(0) = 0, built from the
// binomial series of sqrt(1+t).
double power_series_solution(double t) {
  const int K = 60;
  std::vector<double> s(K), y(K + 2, 0.0);
  s[0] = 1.0;
  for (int k = 1; k < K; ++k) s[k] = s[k - 1] * (0.5 - (k - 1)) / k;
  y[0] = 1.0;
  for (int k = 0; k < K; ++k) {
    double conv = 0.0;
    for (int j = 0; j <= k; ++j) conv += s[j] * y[k - j];
    y[k + 2] = -conv / ((k + 2.0) * (k + 1.0));
  }
  double sum = 0.0, p = 1.0;
  for (int k = 0; k < K + 2; ++k) {
    sum += y[k] * p;
    p *= t;
  }
  return sum;
}

}  // namespace

TEST_CASE("closed-form references") {
  CHECK(std::abs(solve_second_order("-1", 1, 0, M_PI / 2).final_state()(0)) < 1e-10);
  CHECK(std::abs(solve_second_order("1", 1, 0, 1).final_state()(0) - std::cosh(1.0)) < 1e-10);
}

TEST_CASE("variable coefficient against the power series") {
  const auto tr = solve_second_order("-sqrt(t+1)", 1, 0, 0.1);
  const double y = tr.final_state()(0).real();
  CHECK(std::abs(y - power_series_solution(0.1)) < 1e-10);
  CHECK(std::abs(y - 0.994917) < 1e-5);
  for (double t : {0.02, 0.05, 0.08}) CHECK(std::abs(tr.at(t)(0).real() - power_series_solution(t)) < 1e-9);
}

TEST_CASE("trajectory bookkeeping") {
  const auto tr = solve_second_order("-1", 1, 0, 5.0, 1e-9);
  const auto& ts = tr.times();
  for (std::size_t k = 1; k < ts.size(); ++k) CHECK(ts[k] > ts[k - 1]);
  for (double e : tr.local_errors()) CHECK(e <= 1.0);
  CHECK(tr.accepted() == static_cast<long>(ts.size()) - 1);
  CHECK(tr.t_end() == 5.0);
  for (double t : {0.3, 1.7, 4.9}) CHECK(std::abs(tr.at(t)(0).real() - std::cos(t)) < 1e-7);
  CHECK_THROWS(tr.at(5.5));
}

TEST_CASE("negative spans integrate backwards") {
  const auto tr = solve_second_order("-1", 1, 0, -2.0);
  CHECK(std::abs(tr.final_state()(0).real() - std::cos(2.0)) < 1e-10);
  CHECK(std::abs(tr.at(-1.0)(0).real() - std::cos(1.0)) < 1e-8);
}

TEST_CASE("time reversal returns the initial state") {
  const Rhs rhs = [](double t, const CVector& y) {
    CVector d(2);
    d << y(1), -(1.0 + 0.5 * std::sin(t)) * y(0);
    return d;
  };
  CVector y0(2);
  y0 << 1.0, 0.3;
  for (double tol : {1e-8, 1e-10}) {
    OracleOptions opt;
    opt.rel_tol = tol;
    const auto there = integrate_rhs(rhs, 0.0, y0, 3.0, opt);
    const auto back = integrate_rhs(rhs, 3.0, there.final_state(), 0.0, opt);
    CHECK((back.final_state() - y0).norm() < 10 * tol);
  }
}

TEST_CASE("fifth-order convergence with fixed steps") {
  const Rhs rhs = [](double, const CVector& y) {
    CVector d(2);
    d << y(1), -y(0);
    return d;
  };
  CVector y0(2);
  y0 << 1.0, 0.0;
  auto err = [&](double h) {
    OracleOptions opt;
    opt.fixed_step = h;
    return std::abs(integrate_rhs(rhs, 0.0, y0, 2.0, opt).final_state()(0).real() - std::cos(2.0));
  };
  const double ratio = err(0.05) / err(0.025);
  CHECK(ratio > 25.0);
  CHECK(ratio < 40.0);
}

TEST_CASE("adaptive error shrinks with the tolerance") {
  double prev = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const double e = std::abs(solve_second_order("-1", 1, 0, 10.0, tol).final_state()(0).real() - std::cos(10.0));
    CHECK(e < prev);
    CHECK(e < 100 * tol);
    prev = e;
  }
}

TEST_CASE("failures are reported") {
  const Rhs singular = [](double t, const CVector& y) { return CVector(y / ((t - 0.5) * (t - 0.5))); };
  CVector y0 = CVector::Ones(1);
  CHECK_THROWS_AS(integrate_rhs(singular, 0.0, y0, 1.0), NumericalError);
  OracleOptions opt;
  opt.rel_tol = 1e-14;
  CHECK_THROWS(integrate_rhs(singular, 0.0, y0, 0.2, opt));
  const Rhs blowup = [](double, const CVector& y) { return CVector(y.cwiseProduct(y)); };
  CHECK_THROWS_AS(integrate_rhs(blowup, 0.0, y0, 2.0), NumericalError);
}

TEST_CASE("row orientation uses the transpose") {
  CMatrix M(2, 2);
  M << 0, 1, 0, 0;
  CVector y0(2);
  y0 << 1.0, 0.0;
  const MatrixFunction f = [M](double) { return M; };
  const auto row = integrate(f, Orientation::Row, y0, 2.0).final_state();
  const auto col = integrate(f, Orientation::Column, y0, 2.0).final_state();
  CHECK(std::abs(row(1) - 2.0) < 1e-10);
  CHECK(std::abs(col(1)) < 1e-12);
}
