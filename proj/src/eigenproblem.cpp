#include "varode/eigenproblem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "varode/error.hpp"
#include "varode/oracle.hpp"
#include "varode/quadrature.hpp"

namespace varode {

namespace {

constexpr int kPanels = 2000;

// With u = sin(theta), theta = pi/2 - w^2, the (1 - u^2)^(k/4) factors become
// smooth in w on [0, sqrt(pi/2)] and du = 2 w cos(theta) dw.
template <typename G>
double over_unit_interval(G&& integrand) {
  const double w_max = std::sqrt(std::numbers::pi / 2.0);
  return simpson<double>(
      [&](double w) {
        const double theta = std::numbers::pi / 2.0 - w * w;
        const double c = std::cos(theta);
        const double phase = theta + std::sin(theta) * c;
        return 2.0 * w * integrand(c, phase);
      },
      0.0, w_max, kPanels);
}

}  // namespace

const char* to_string(BoundarySpec b) {
  switch (b) {
    case BoundarySpec::Dirichlet: return "dirichlet";
    case BoundarySpec::Symmetric: return "symmetric";
    case BoundarySpec::Mixed: return "mixed";
  }
  return "dirichlet";
}

BoundarySpec boundary_from_string(const std::string& name) {
  if (name == "dirichlet") return BoundarySpec::Dirichlet;
  if (name == "symmetric") return BoundarySpec::Symmetric;
  if (name == "mixed") return BoundarySpec::Mixed;
  throw std::invalid_argument("unknown boundary family '" + name + "'");
}

double characteristic_dirichlet(double lambda) {
  const double k = std::sqrt(lambda) / 2.0;
  return over_unit_interval([k](double c, double phase) { return std::pow(c, 1.5) * std::cos(k * phase); });
}

double characteristic_symmetric(double lambda) {
  const double r = std::sqrt(lambda), k = r / 2.0;
  return r * over_unit_interval([k](double c, double phase) { return std::pow(c, 1.5) * std::sin(k * phase); });
}

double characteristic_mixed(double lambda) {
  const double r = std::sqrt(lambda), k = r / 2.0;
  return 1.0 - r * over_unit_interval([k](double c, double phase) { return std::pow(c, 2.5) * std::sin(k * phase); });
}

double characteristic(BoundarySpec spec, double lambda) {
  switch (spec) {
    case BoundarySpec::Dirichlet: return characteristic_dirichlet(lambda);
    case BoundarySpec::Symmetric: return characteristic_symmetric(lambda);
    case BoundarySpec::Mixed: return characteristic_mixed(lambda);
  }
  return 0.0;
}

double wkb_eigen(int n) {
  if (n < 1) throw std::invalid_argument("wkb_eigen: n must be >= 1");
  return 16.0 * n * n;
}

std::vector<double> find_roots(const std::function<double(double)>& F, double lo, double hi, double step, double tol) {
  if (!(step > 0) || !(tol > 0)) throw std::invalid_argument("find_roots: step and tol must be positive");
  std::vector<double> roots;
  double a = lo, fa = F(a);
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 1; k <= count; ++k) {
    double b = lo + double(k) * step, fb = F(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa != 0.0 && (fa < 0) != (fb < 0)) {
      double l = a, r = b, fl = fa;
      while (r - l >= tol) {
        const double mid = 0.5 * (l + r), fm = F(mid);
        if (fm == 0.0) {
          l = r = mid;
          break;
        }
        if ((fm < 0) == (fl < 0)) {
          l = mid;
          fl = fm;
        } else {
          r = mid;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

double shooting_residual(BoundarySpec spec, double lambda) {
  CVector y0(2);
  if (spec == BoundarySpec::Symmetric)
    y0 << 1.0, 0.0;
  else
    y0 << 0.0, 1.0;
  const Rhs rhs = [lambda](double t, const CVector& y) {
    CVector d(2);
    d << y(1), -lambda * (1.0 - t * t) * y(0);
    return d;
  };
  OracleOptions opt;
  opt.rel_tol = 1e-11;
  const CVector end = integrate_rhs(rhs, 0.0, y0, 1.0, opt).final_state();
  switch (spec) {
    case BoundarySpec::Dirichlet: return end(0).real();
    case BoundarySpec::Symmetric: return end(0).real() - y0(0).real();
    case BoundarySpec::Mixed: return end(1).real();
  }
  return 0.0;
}

std::vector<double> shoot_exact(BoundarySpec spec, double lo, double hi, double step, double tol) {
  return find_roots([spec](double lambda) { return shooting_residual(spec, lambda); }, lo, hi, step, tol);
}

double default_upper_bound(BoundarySpec spec) { return spec == BoundarySpec::Symmetric ? 550.0 : 450.0; }

std::vector<EigenResult> eigen_table(BoundarySpec spec, int count) {
  const double hi = default_upper_bound(spec);
  const auto exact = shoot_exact(spec, 1.0, hi);
  const auto approx = find_roots([spec](double l) { return characteristic(spec, l); }, 1.0, hi);
  if (static_cast<int>(exact.size()) < count || static_cast<int>(approx.size()) < count)
    throw NumericalError(std::string("eigen_table: fewer than ") + std::to_string(count) + " eigenvalues found for " +
                         to_string(spec));
  std::vector<EigenResult> rows;
  for (int i = 0; i < count; ++i) {
    EigenResult r;
    r.n = i + 1;
    r.lambda_exact = exact[static_cast<std::size_t>(i)];
    r.lambda_approx = approx[static_cast<std::size_t>(i)];
    r.rel_error = std::abs(r.lambda_exact - r.lambda_approx) / r.lambda_exact;
    if (spec == BoundarySpec::Dirichlet) {
      r.lambda_wkb = wkb_eigen(r.n);
      r.wkb_rel_error = std::abs(r.lambda_exact - *r.lambda_wkb) / r.lambda_exact;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace varode
