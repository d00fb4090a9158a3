#pragma once

#include <complex>
#include <random>

#include "varode/types.hpp"

namespace varode::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  cplx complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }

  CMatrix matrix(Eigen::Index n, double r) {
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex(r);
    return m;
  }

  CVector vector(Eigen::Index n, double r) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex(r);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace varode::testing
