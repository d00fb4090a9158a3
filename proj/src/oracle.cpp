#include "varode/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varode/error.hpp"

namespace varode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

std::string location(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

CVector checked(const Rhs& rhs, double t, const CVector& y) {
  CVector d = rhs(t, y);
  if (!d.allFinite()) throw NumericalError("oracle: singular coefficient evaluation at t = " + location(t));
  return d;
}

}  // namespace

CVector Trajectory::at(double t) const {
  const bool forward = times_.back() >= times_.front();
  const double lo = std::min(times_.front(), times_.back());
  const double hi = std::max(times_.front(), times_.back());
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (t < lo - slack || t > hi + slack) throw std::out_of_range("Trajectory::at: t outside integrated range");
  if (times_.size() == 1) return states_.front();

  // First index whose time is at or past t along the integration direction.
  auto it = forward ? std::lower_bound(times_.begin(), times_.end(), t)
                    : std::lower_bound(times_.begin(), times_.end(), t, std::greater<>());
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k == 0) k = 1;
  if (k >= times_.size()) k = times_.size() - 1;

  const double t0 = times_[k - 1];
  const double h = times_[k] - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * states_[k - 1] + (h10 * h) * derivatives_[k - 1] + h01 * states_[k] + (h11 * h) * derivatives_[k];
}

Trajectory integrate_rhs(const Rhs& rhs, double t0, const CVector& y0, double t_end, const OracleOptions& opt) {
  if (!(opt.rel_tol >= 1e-13)) throw std::invalid_argument("oracle: rel_tol must be >= 1e-13");
  const double atol = opt.abs_tol < 0 ? opt.rel_tol : opt.abs_tol;
  const double span = t_end - t0;
  const double dir = span >= 0 ? 1.0 : -1.0;

  Trajectory tr;
  CVector y = y0;
  double t = t0;
  CVector k1 = checked(rhs, t, y);
  tr.times_.push_back(t);
  tr.states_.push_back(y);
  tr.derivatives_.push_back(k1);
  tr.errors_.push_back(0.0);
  if (span == 0.0) return tr;

  double h;
  if (opt.fixed_step) {
    h = dir * std::abs(*opt.fixed_step);
  } else if (opt.initial_step > 0) {
    h = dir * opt.initial_step;
  } else {
    const double d0 = y.cwiseAbs().maxCoeff(), d1 = k1.cwiseAbs().maxCoeff();
    const double guess = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = dir * std::min(std::abs(span), std::max(guess, 1e-6));
  }

  const double eps = std::numeric_limits<double>::epsilon();
  long steps = 0;
  while (dir * (t_end - t) > 0) {
    if (++steps > opt.max_steps) throw NumericalError("oracle: step budget exhausted near t = " + location(t));
    bool last = false;
    if (dir * (t + h - t_end) >= -1e-10 * std::abs(h)) {
      h = t_end - t;
      last = true;
    }
    if (std::abs(h) < 16 * eps * std::max(1.0, std::abs(t)))
      throw StepUnderflowError("oracle: step size underflow at t = " + location(t));

    const CVector k2 = checked(rhs, t + c2 * h, y + h * (a21 * k1));
    const CVector k3 = checked(rhs, t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const CVector k4 = checked(rhs, t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const CVector k5 = checked(rhs, t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const CVector k6 = checked(rhs, t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const CVector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double t_new = last ? t_end : t + h;
    const CVector k7 = checked(rhs, t_new, y_new);
    const CVector err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = atol + opt.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err = std::max(err, std::abs(err_vec(i)) / sc);
    }

    if (opt.fixed_step || err <= 1.0) {
      t = t_new;
      y = y_new;
      k1 = k7;
      tr.times_.push_back(t);
      tr.states_.push_back(y);
      tr.derivatives_.push_back(k1);
      tr.errors_.push_back(opt.fixed_step ? err : std::min(err, 1.0));
      ++tr.accepted_;
      if (!opt.fixed_step) {
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
      }
    } else {
      ++tr.rejected_;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
    }
  }
  return tr;
}

Trajectory integrate(const MatrixFunction& system, Orientation orientation, const CVector& y0, double t_end,
                     const OracleOptions& options) {
  Rhs rhs;
  if (orientation == Orientation::Column)
    rhs = [&system](double t, const CVector& y) -> CVector { return system(t) * y; };
  else
    rhs = [&system](double t, const CVector& y) -> CVector { return system(t).transpose() * y; };
  return integrate_rhs(rhs, 0.0, y0, t_end, options);
}

}  // namespace varode
