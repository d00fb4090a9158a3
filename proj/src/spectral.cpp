#include "varode/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>

#include "varode/error.hpp"
#include "varode/quadrature.hpp"

namespace varode {

namespace {

constexpr double kTurningPoint = 1e-14;
constexpr double kCorrectionSkip = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Values at the fine nodes u_j = j * h, j = 0 .. count-1 (h may be negative).
using Kernel = std::function<std::vector<CVector>(double h, long count)>;

std::vector<cplx> sample(const Expr& f, double h, long count, const Params& params) {
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = eval(f, cplx(double(j) * h), params);
  return out;
}

bool has_nan(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::isnan(v(i).real()) || std::isnan(v(i).imag())) return true;
  return false;
}

std::vector<CVector> run_once(const UniformGrid& grid, int m, const Kernel& kernel, std::vector<double>& times) {
  const auto [k_lo, k_hi] = grid.index_range();
  std::vector<CVector> values;
  times.clear();
  const double h = grid.step / m;
  if (k_lo < 0) {
    const auto back = kernel(-h, -k_lo * m + 1);
    for (long k = k_lo; k < 0; ++k) {
      times.push_back(double(k) * grid.step);
      values.push_back(back[static_cast<std::size_t>(-k * m)]);
    }
  }
  const auto fwd = kernel(h, k_hi * m + 1);
  for (long k = 0; k <= k_hi; ++k) {
    times.push_back(double(k) * grid.step);
    values.push_back(fwd[static_cast<std::size_t>(k * m)]);
  }
  return values;
}

ApproxSolution drive(const UniformGrid& grid, const SpectralOptions& options, const Kernel& kernel) {
  if (!(grid.step > 0)) throw std::invalid_argument("grid step must be positive");
  if (grid.lo > 0 || grid.hi < 0) throw std::invalid_argument("grid must contain t = 0");
  const int per_unit = options.panels_per_unit > 0 ? options.panels_per_unit : default_panels_per_unit();
  int m = static_cast<int>(std::ceil(per_unit * grid.step / 4.0)) * 4;
  m = std::max(m, 4);

  ApproxSolution sol;
  sol.values = run_once(grid, m, kernel, sol.times);
  std::vector<double> coarse_times;
  const auto coarse = run_once(grid, m / 2, kernel, coarse_times);
  sol.panels_per_cell = m;

  sol.divergent.resize(sol.values.size());
  for (std::size_t k = 0; k < sol.values.size(); ++k) {
    const CVector& v = sol.values[k];
    sol.divergent[k] = has_nan(v);
    if (sol.divergent[k]) continue;
    sol.imag_residual = std::max(sol.imag_residual, std::abs(v(0).imag()));
    if (has_nan(coarse[k])) continue;
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    sol.refinement_change = std::max(sol.refinement_change, (v - coarse[k]).cwiseAbs().maxCoeff() / scale);
  }
  if (sol.refinement_change > options.convergence_tol)
    throw NonConvergenceError("quadrature refinement changed the result by " + std::to_string(sol.refinement_change) +
                              " (tolerance " + std::to_string(options.convergence_tol) + ")");
  return sol;
}

void require_regular_start(const Expr& f, const Params& params) {
  if (std::abs(eval(f, cplx(0.0), params)) < kTurningPoint)
    throw TurningPointError("f(0) vanishes: the initial point is a turning point");
}

std::vector<cplx> roots(const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::sqrt(v[j]);
  return out;
}

}  // namespace

std::vector<double> UniformGrid::nodes() const {
  const auto [a, b] = index_range();
  std::vector<double> out;
  for (long k = a; k <= b; ++k) out.push_back(double(k) * step);
  return out;
}

std::pair<long, long> UniformGrid::index_range() const {
  const long a = static_cast<long>(std::ceil(lo / step - 1e-9));
  const long b = static_cast<long>(std::floor(hi / step + 1e-9));
  return {a, b};
}

int default_panels_per_unit() {
  if (const char* env = std::getenv("VARODE_PANELS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 4 || v > 10'000'000)
      throw ConfigError("VARODE_PANELS: expected an integer in [4, 10000000], got '" + std::string(env) + "'");
    return static_cast<int>(v);
  }
  return 4096;
}

std::vector<double> ApproxSolution::real_component(int i) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v(i).real());
  return out;
}

std::pair<EigenTriple, EigenTriple> companion_eigensystem(const Expr& f, double t, const Params& params) {
  const cplx fv = eval(f, cplx(t), params);
  if (std::abs(fv) < kTurningPoint) throw TurningPointError("companion eigensystem requested at a turning point");
  const cplx s = std::sqrt(fv);
  const cplx N = 1.0 / (std::sqrt(2.0) * std::sqrt(s));
  EigenTriple one{s, CVector(2), CVector(2)}, two{-s, CVector(2), CVector(2)};
  one.right << N, N * s;
  one.left << N * s, N;
  two.right << N, -N * s;
  two.left << N * s, -N;
  return {one, two};
}

std::pair<cplx, cplx> companion_coefficients(const Expr& f, cplx a, cplx b, const Params& params) {
  const auto [one, two] = companion_eigensystem(f, 0.0, params);
  CVector Y0(2);
  Y0 << a, b;
  return {one.left.transpose() * Y0, two.left.transpose() * Y0};
}

ApproxSolution approx_first_order(const Expr& f, cplx a, cplx b, const UniformGrid& grid,
                                  const SpectralOptions& options) {
  require_regular_start(f, options.params);
  Kernel kernel = [&](double h, long count) {
    const auto fv = sample(f, h, count, options.params);
    const auto s = roots(fv);
    const auto q = roots(s);
    const auto phase = cumulative_simpson(s, h);
    const cplx s0 = s[0], q0 = q[0];
    std::vector<cplx> iy(fv.size()), idy(fv.size());
    for (std::size_t j = 0; j < fv.size(); ++j) {
      const cplx ch = std::cosh(phase[j]), sh = std::sinh(phase[j]);
      iy[j] = q[j] / q0 * (a * s0 * sh + b * ch);
      idy[j] = q[j] * q[j] * q[j] / q0 * (a * s0 * ch + b * sh);
    }
    const auto y = cumulative_simpson(iy, h);
    const auto dy = cumulative_simpson(idy, h);
    std::vector<CVector> out(fv.size(), CVector(2));
    for (std::size_t j = 0; j < fv.size(); ++j) out[j] << a + y[j], b + dy[j];
    return out;
  };
  return drive(grid, options, kernel);
}

ApproxSolution approx_wkb_form(const Expr& f, cplx A, cplx B, const UniformGrid& grid,
                               const SpectralOptions& options) {
  const Expr df = differentiate(f);
  Kernel kernel = [&](double h, long count) {
    const auto fv = sample(f, h, count, options.params);
    const auto dfv = sample(df, h, count, options.params);
    for (std::size_t j = 0; j < fv.size(); ++j)
      if (std::abs(fv[j]) < kTurningPoint)
        throw TurningPointError("approx_wkb_form: turning point at t = " + std::to_string(double(j) * h));
    const auto s = roots(fv);
    const auto q = roots(s);
    const auto phase = cumulative_simpson(s, h);
    std::vector<cplx> iy(fv.size()), idy(fv.size());
    std::vector<cplx> even(fv.size()), odd(fv.size());
    for (std::size_t j = 0; j < fv.size(); ++j) {
      const cplx ch = std::cosh(phase[j]), sh = std::sinh(phase[j]);
      even[j] = A * ch + B * sh;
      odd[j] = A * sh + B * ch;
      const cplx q2 = q[j] * q[j];
      iy[j] = dfv[j] / (q2 * q2 * q[j]) * even[j];
      idy[j] = dfv[j] / (q2 * q[j]) * odd[j];
    }
    const auto y = cumulative_simpson(iy, h);
    const auto dy = cumulative_simpson(idy, h);
    std::vector<CVector> out(fv.size(), CVector(2));
    for (std::size_t j = 0; j < fv.size(); ++j)
      out[j] << even[j] / q[j] + 0.25 * y[j], q[j] * odd[j] - 0.25 * dy[j];
    return out;
  };
  return drive(grid, options, kernel);
}

ApproxSolution wkb(const Expr& f, const UniformGrid& grid, const SpectralOptions& options) {
  require_regular_start(f, options.params);
  Kernel kernel = [&](double h, long count) {
    const auto fv = sample(f, h, count, options.params);
    const auto s = roots(fv);
    const auto phase = cumulative_simpson(s, h);
    const cplx q0 = std::sqrt(s[0]);
    std::vector<CVector> out(fv.size(), CVector(1));
    for (std::size_t j = 0; j < fv.size(); ++j) {
      if (std::abs(fv[j]) < kTurningPoint)
        out[j](0) = cplx(kNaN, kNaN);
      else
        out[j](0) = q0 / std::sqrt(s[j]) * std::cosh(phase[j]);
    }
    return out;
  };
  return drive(grid, options, kernel);
}

ApproxSolution correction(const Expr& f, cplx c1, cplx c2, const UniformGrid& grid, const SpectralOptions& options) {
  require_regular_start(f, options.params);
  const Expr df = differentiate(f);
  Kernel kernel = [&](double h, long count) {
    const auto fv = sample(f, h, count, options.params);
    const auto dfv = sample(df, h, count, options.params);
    const auto s = roots(fv);
    const auto q = roots(s);
    const auto phase = cumulative_simpson(s, h);
    const std::size_t n = fv.size();
    std::vector<cplx> gm(n), gp(n);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx g = std::abs(fv[j]) < kCorrectionSkip ? cplx{} : dfv[j] / (4.0 * fv[j]);
      gm[j] = g * std::exp(-2.0 * phase[j]);
      gp[j] = g * std::exp(2.0 * phase[j]);
    }
    const auto Im = cumulative_simpson(gm, h);
    const auto Ip = cumulative_simpson(gp, h);
    std::vector<CVector> outer(n, CVector(2));
    const double r2 = std::sqrt(2.0);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx up = std::exp(phase[j]) * c2 * Im[j];
      const cplx down = std::exp(-phase[j]) * c1 * Ip[j];
      outer[j] << q[j] / r2 * (up - down), q[j] * q[j] * q[j] / r2 * (up + down);
    }
    return cumulative_simpson(outer, h);
  };
  return drive(grid, options, kernel);
}

CVector correction(const Expr& f, cplx c1, cplx c2, double t, const SpectralOptions& options) {
  if (t == 0.0) return CVector::Zero(2);
  const UniformGrid grid{std::min(0.0, t), std::max(0.0, t), std::abs(t)};
  const ApproxSolution sol = correction(f, c1, c2, grid, options);
  return t > 0 ? sol.values.back() : sol.values.front();
}

ApproxSolution approx_corrected(const Expr& f, cplx a, cplx b, const UniformGrid& grid,
                                const SpectralOptions& options) {
  ApproxSolution sol = approx_first_order(f, a, b, grid, options);
  const auto [c1, c2] = companion_coefficients(f, a, b, options.params);
  const ApproxSolution delta = correction(f, c1, c2, grid, options);
  sol.imag_residual = 0.0;
  for (std::size_t k = 0; k < sol.values.size(); ++k) {
    const double base = sol.values[k].norm();
    if (base > 0) sol.validity_ratio = std::max(sol.validity_ratio, delta.values[k].norm() / base);
    sol.values[k] += delta.values[k];
    sol.imag_residual = std::max(sol.imag_residual, std::abs(sol.values[k](0).imag()));
  }
  sol.refinement_change = std::max(sol.refinement_change, delta.refinement_change);
  return sol;
}

ApproxSolution general_first_order(const MatrixFunction& system, const CVector& Y0, const UniformGrid& grid,
                                   Orientation orientation, const SpectralOptions& options) {
  Kernel kernel = [&](double h, long count) {
    const std::size_t n_nodes = static_cast<std::size_t>(count);
    const std::size_t dim = static_cast<std::size_t>(Y0.size());
    std::vector<std::vector<cplx>> lambda(dim, std::vector<cplx>(n_nodes));
    std::vector<std::vector<CVector>> right(dim, std::vector<CVector>(n_nodes));
    std::vector<cplx> c(dim);
    std::vector<EigenTriple> prev;

    for (std::size_t j = 0; j < n_nodes; ++j) {
      const double u = double(j) * h;
      CMatrix M = system(u);
      if (orientation == Orientation::Row) M.transposeInPlace();
      if (static_cast<std::size_t>(M.rows()) != dim)
        throw std::invalid_argument("general_first_order: initial vector dimension mismatch");
      auto triples = eig_general(M);
      for (auto& tr : triples) {
        const double alpha = std::sqrt(tr.left.norm() / tr.right.norm());
        tr.right *= alpha;
        tr.left /= alpha;
      }
      if (j > 0) {
        std::vector<EigenTriple> ordered(dim);
        std::vector<bool> taken(dim, false);
        for (std::size_t a = 0; a < dim; ++a) {
          std::size_t best = 0;
          double best_d = std::numeric_limits<double>::infinity();
          for (std::size_t b = 0; b < dim; ++b) {
            const double d = std::abs(triples[b].value - prev[a].value);
            if (d < best_d) {
              best_d = d;
              best = b;
            }
          }
          if (taken[best])
            throw DefectiveMatrixError("general_first_order: eigenvalue tracking ambiguous at t = " +
                                       std::to_string(u));
          taken[best] = true;
          ordered[a] = triples[best];
          const cplx p = prev[a].right.dot(ordered[a].right);
          if (std::abs(p) == 0.0)
            throw DefectiveMatrixError("general_first_order: eigenvector jump at t = " + std::to_string(u));
          const cplx phase = p / std::abs(p);
          ordered[a].right *= std::conj(phase);
          ordered[a].left *= phase;
        }
        triples = std::move(ordered);
      } else {
        for (std::size_t n = 0; n < dim; ++n) c[n] = triples[n].left.transpose() * Y0;
      }
      for (std::size_t n = 0; n < dim; ++n) {
        lambda[n][j] = triples[n].value;
        right[n][j] = triples[n].right;
      }
      prev = std::move(triples);
    }

    std::vector<CVector> integrand(n_nodes, CVector::Zero(Y0.size()));
    for (std::size_t n = 0; n < dim; ++n) {
      const auto phase = cumulative_simpson(lambda[n], h);
      for (std::size_t j = 0; j < n_nodes; ++j) integrand[j] += c[n] * lambda[n][j] * std::exp(phase[j]) * right[n][j];
    }
    auto out = cumulative_simpson(integrand, h);
    for (auto& v : out) v += Y0;
    return out;
  };
  return drive(grid, options, kernel);
}

}  // namespace varode
