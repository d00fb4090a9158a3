#pragma once

#include <functional>
#include <vector>

#include "varode/expr.hpp"
#include "varode/types.hpp"

namespace varode {

/// Matrix-valued coefficient function t -> M(t).
using MatrixFunction = std::function<CMatrix(double)>;

/// y^(n) + a_{n-1}(t) y^(n-1) + ... + a_0(t) y = 0.
struct ScalarODE {
  std::vector<Expr> coefficients;  // a_0 .. a_{n-1}
  CVector initial;                 // y(0), y'(0), ..., y^(n-1)(0)

  int order() const { return static_cast<int>(coefficients.size()); }

  /// y'' = f(t) y, i.e. a_0 = -f, a_1 = 0.
  static ScalarODE second_order(const Expr& f, cplx y0, cplx dy0);
};

/// First-order form of a ScalarODE. For the column orientation the matrix has
/// ones on the superdiagonal and last row -a_0 .. -a_{n-1}; the row
/// orientation uses its transpose.
class CompanionSystem {
 public:
  CompanionSystem(std::vector<Expr> coefficients, Orientation orientation, CVector initial, Params params = {});

  int dim() const { return static_cast<int>(coefficients_.size()); }
  Orientation orientation() const { return orientation_; }
  const CVector& initial() const { return initial_; }
  const Params& params() const { return params_; }

  CMatrix operator()(double t) const;

  MatrixFunction as_function() const {
    return [self = *this](double t) { return self(t); };
  }

 private:
  std::vector<Expr> coefficients_;
  Orientation orientation_;
  CVector initial_;
  Params params_;
};

CompanionSystem to_companion(const ScalarODE& ode, Orientation orientation, const Params& params = {});

}  // namespace varode
