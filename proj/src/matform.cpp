#include "varode/matform.hpp"

#include <stdexcept>

#include "varode/linalg.hpp"

namespace varode {

ScalarODE ScalarODE::second_order(const Expr& f, cplx y0, cplx dy0) {
  ScalarODE ode;
  ode.coefficients = {-f, Expr::constant(0.0)};
  ode.initial = CVector(2);
  ode.initial << y0, dy0;
  return ode;
}

CompanionSystem::CompanionSystem(std::vector<Expr> coefficients, Orientation orientation, CVector initial,
                                 Params params)
    : coefficients_(std::move(coefficients)),
      orientation_(orientation),
      initial_(std::move(initial)),
      params_(std::move(params)) {
  if (coefficients_.empty()) throw std::invalid_argument("companion system needs order >= 1");
  check_dimension(static_cast<Eigen::Index>(coefficients_.size()));
  if (initial_.size() != static_cast<Eigen::Index>(coefficients_.size()))
    throw std::invalid_argument("companion system: initial vector length must equal the order");
}

CMatrix CompanionSystem::operator()(double t) const {
  const int n = dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) m(n - 1, j) = -eval(coefficients_[static_cast<std::size_t>(j)], t, params_);
  if (orientation_ == Orientation::Row) m.transposeInPlace();
  return m;
}

CompanionSystem to_companion(const ScalarODE& ode, Orientation orientation, const Params& params) {
  if (ode.order() < 1) throw std::invalid_argument("to_companion: order must be >= 1");
  return CompanionSystem(ode.coefficients, orientation, ode.initial, params);
}

}  // namespace varode
