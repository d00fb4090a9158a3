#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace varode {

/// Running integral of uniformly sampled values, out[k] = integral from node 0
/// to node k. Even nodes use composite Simpson; odd nodes add a one-panel
/// quadratic rule to the preceding even node. `step` may be negative.
/// Works for any T with T + T and double * T (double, complex, Eigen vectors).
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double step) {
  const std::size_t n = f.size();
  if (n == 0) return {};
  std::vector<T> out(n);
  out[0] = 0.0 * f[0];
  if (n == 1) return out;
  if (n == 2) {
    out[1] = (0.5 * step) * (f[0] + f[1]);
    return out;
  }
  const double third = step / 3.0;
  const double twelfth = step / 12.0;
  for (std::size_t k = 2; k < n; k += 2) out[k] = out[k - 2] + third * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  for (std::size_t k = 1; k < n; k += 2) {
    if (k + 1 < n)
      out[k] = out[k - 1] + twelfth * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
    else
      out[k] = out[k - 1] + twelfth * (-1.0 * f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
  }
  return out;
}

template <typename T>
std::vector<T> cumulative_simpson(const std::vector<T>& f, double step) {
  return cumulative_simpson(std::span<const T>(f), step);
}

/// Composite Simpson over [a, b] with an even number of panels.
template <typename T, typename F>
T simpson(F&& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("simpson: panel count must be even and >= 2");
  const double h = (b - a) / panels;
  T sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum = sum + (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return (h / 3.0) * sum;
}

}  // namespace varode
