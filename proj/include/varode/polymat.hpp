#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "varode/error.hpp"
#include "varode/linalg.hpp"
#include "varode/types.hpp"

namespace varode {

/// Square matrix whose entries are polynomials in z, stored as a list of
/// coefficient matrices: M(z) = sum_k coefficient(k) z^k.
///
/// Arithmetic is exact in the coefficient field: derivatives shift
/// coefficients, products convolve them. Exactly-zero leading coefficients
/// are trimmed, so degree() is the true degree. Any result whose degree would
/// exceed kMaxDegree raises DegreeCapError.
template <typename Scalar = cplx>
class PolyMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  static constexpr int kMaxDegree = 16;

  explicit PolyMatrix(Eigen::Index n = 2, Orientation orientation = Orientation::Row)
      : n_(n), orientation_(orientation), coeffs_{Matrix::Zero(n, n)} {
    check_dimension(n);
  }

  PolyMatrix(std::vector<Matrix> coefficients, Orientation orientation) : orientation_(orientation) {
    if (coefficients.empty()) throw std::invalid_argument("PolyMatrix: at least one coefficient required");
    n_ = coefficients.front().rows();
    check_dimension(n_);
    for (const auto& c : coefficients)
      if (c.rows() != n_ || c.cols() != n_) throw std::invalid_argument("PolyMatrix: inconsistent coefficient shape");
    coeffs_ = std::move(coefficients);
    trim();
  }

  static PolyMatrix constant(const Matrix& m, Orientation o = Orientation::Row) { return PolyMatrix({m}, o); }

  Eigen::Index dim() const { return n_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Orientation orientation() const { return orientation_; }

  const Matrix& coefficient(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  Matrix coefficient_or_zero(int k) const {
    return k <= degree() ? coeffs_[static_cast<std::size_t>(k)] : Matrix::Zero(n_, n_);
  }
  const std::vector<Matrix>& coefficients() const { return coeffs_; }

  PolyMatrix with_orientation(Orientation o) const {
    PolyMatrix r = *this;
    r.orientation_ = o;
    return r;
  }

  /// Entry-wise transpose; flips the orientation flag.
  PolyMatrix transpose() const {
    std::vector<Matrix> c;
    for (const auto& m : coeffs_) c.push_back(m.transpose());
    return PolyMatrix(std::move(c), orientation_ == Orientation::Row ? Orientation::Column : Orientation::Row);
  }

  Matrix operator()(Scalar z) const {
    Matrix r = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) r = (r * z + coeffs_[static_cast<std::size_t>(k)]).eval();
    return r;
  }

  PolyMatrix derivative() const {
    if (degree() == 0) return PolyMatrix({Matrix::Zero(n_, n_)}, orientation_);
    std::vector<Matrix> c;
    for (int k = 1; k <= degree(); ++k) c.push_back(Scalar(double(k)) * coeffs_[static_cast<std::size_t>(k)]);
    return PolyMatrix(std::move(c), orientation_);
  }

  bool is_zero() const { return degree() == 0 && coeffs_[0].isZero(0.0); }

  /// Largest absolute coefficient over all entries and powers.
  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
  }

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    a.check_compatible(b);
    std::vector<Matrix> c(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1));
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] = a.coefficient_or_zero(static_cast<int>(k)) + b.coefficient_or_zero(static_cast<int>(k));
    return PolyMatrix(std::move(c), a.orientation_);
  }

  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) { return a + Scalar(-1.0) * b; }

  friend PolyMatrix operator*(Scalar s, const PolyMatrix& a) {
    std::vector<Matrix> c;
    for (const auto& m : a.coeffs_) c.push_back(s * m);
    return PolyMatrix(std::move(c), a.orientation_);
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    a.check_compatible(b);
    const int deg = a.degree() + b.degree();
    if (deg > kMaxDegree && !a.is_zero() && !b.is_zero())
      throw DegreeCapError("PolyMatrix product degree " + std::to_string(deg) + " exceeds cap " +
                           std::to_string(kMaxDegree));
    std::vector<Matrix> c(static_cast<std::size_t>(deg + 1), Matrix::Zero(a.n_, a.n_));
    for (int i = 0; i <= a.degree(); ++i)
      for (int j = 0; j <= b.degree(); ++j)
        c[static_cast<std::size_t>(i + j)] += a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
    return PolyMatrix(std::move(c), a.orientation_);
  }

  /// Polynomial times a constant matrix on either side.
  friend PolyMatrix operator*(const PolyMatrix& a, const Matrix& m) { return a * PolyMatrix({m}, a.orientation_); }
  friend PolyMatrix operator*(const Matrix& m, const PolyMatrix& a) { return PolyMatrix({m}, a.orientation_) * a; }

  /// Exact coefficient-wise equality (orientation ignored).
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.n_ != b.n_ || a.degree() != b.degree()) return false;
    for (int k = 0; k <= a.degree(); ++k)
      if (a.coeffs_[static_cast<std::size_t>(k)] != b.coeffs_[static_cast<std::size_t>(k)]) return false;
    return true;
  }

 private:
  void trim() {
    while (coeffs_.size() > 1 && coeffs_.back().isZero(0.0)) coeffs_.pop_back();
    if (degree() > kMaxDegree)
      throw DegreeCapError("PolyMatrix degree " + std::to_string(degree()) + " exceeds cap " +
                           std::to_string(kMaxDegree));
  }

  void check_compatible(const PolyMatrix& b) const {
    if (n_ != b.n_) throw std::invalid_argument("PolyMatrix: dimension mismatch");
  }

  Eigen::Index n_;
  Orientation orientation_;
  std::vector<Matrix> coeffs_;
};

using PolyMatrixc = PolyMatrix<cplx>;

/// The operator O = d/dz + M applied to X. For a row system (Y' = Y M) this is
/// X' + M X; for a column system (Y' = M Y) it is X' + X M. With this choice
/// the (n+1)-th derivative of Y is Y (O^n M) or (O^n M) Y respectively.
template <typename Scalar>
PolyMatrix<Scalar> apply_O(const PolyMatrix<Scalar>& M, const PolyMatrix<Scalar>& X) {
  if (M.dim() != X.dim()) throw std::invalid_argument("apply_O: dimension mismatch");
  if (M.orientation() != X.orientation()) throw std::invalid_argument("apply_O: orientation mismatch");
  if (M.orientation() == Orientation::Row) return X.derivative() + M * X;
  return X.derivative() + X * M;
}

template <typename Scalar>
PolyMatrix<Scalar> power_O(const PolyMatrix<Scalar>& M, int n) {
  if (n < 0) throw std::invalid_argument("power_O: n must be non-negative");
  PolyMatrix<Scalar> X = M;
  for (int k = 0; k < n; ++k) X = apply_O(M, X);
  return X;
}

/// Values (O^k M)(0) for k = 0 .. count-1.
///
/// Computed on truncated coefficient jets: the value of O^k M at 0 only needs
/// the coefficients of O^(k-j) M up to degree j, so each step keeps exactly the
/// degrees still required. Results are identical to evaluating power_O at 0,
/// without the degree cap.
template <typename Scalar>
std::vector<typename PolyMatrix<Scalar>::Matrix> derivative_chain_at_zero(const PolyMatrix<Scalar>& M, int count) {
  using Matrix = typename PolyMatrix<Scalar>::Matrix;
  const Eigen::Index n = M.dim();
  const bool row = M.orientation() == Orientation::Row;
  std::vector<Matrix> out;
  if (count <= 0) return out;

  std::vector<Matrix> X(static_cast<std::size_t>(count), Matrix::Zero(n, n));
  for (int k = 0; k < count; ++k) X[static_cast<std::size_t>(k)] = M.coefficient_or_zero(k);
  out.push_back(X[0]);

  for (int step = 1; step < count; ++step) {
    const int keep = count - step;  // degrees 0 .. keep-1 remain exact
    std::vector<Matrix> next(static_cast<std::size_t>(keep), Matrix::Zero(n, n));
    for (int k = 0; k < keep; ++k) {
      Matrix acc = Scalar(double(k + 1)) * X[static_cast<std::size_t>(k + 1)];
      for (int i = 0; i <= std::min(k, M.degree()); ++i) {
        const Matrix& Mi = M.coefficient(i);
        const Matrix& Xj = X[static_cast<std::size_t>(k - i)];
        acc += row ? Matrix(Mi * Xj) : Matrix(Xj * Mi);
      }
      next[static_cast<std::size_t>(k)] = std::move(acc);
    }
    X = std::move(next);
    out.push_back(X[0]);
  }
  return out;
}

struct TaylorResult {
  CVector value;
  double tail = 0.0;  // magnitude of the last added term
  int terms = 0;
};

/// Truncated operator series Y(z) = Y0 + sum_k (O^k M)(0) z^(k+1)/(k+1)!,
/// applied on the side given by M's orientation. Throws NonConvergenceError
/// when the term magnitudes are not decreasing over the final five terms.
inline TaylorResult taylor_solve(const PolyMatrixc& M, const CVector& Y0, double z, int terms = 60) {
  if (Y0.size() != M.dim()) throw std::invalid_argument("taylor_solve: initial vector dimension mismatch");
  if (terms < 6) throw std::invalid_argument("taylor_solve: need at least 6 terms");
  const auto chain = derivative_chain_at_zero(M, terms);
  const bool row = M.orientation() == Orientation::Row;

  CVector y = Y0;
  std::vector<double> magnitudes;
  double factor = 1.0;  // z^(k+1)/(k+1)!
  for (int k = 0; k < terms; ++k) {
    factor *= z / double(k + 1);
    CVector term = row ? CVector(chain[static_cast<std::size_t>(k)].transpose() * Y0)
                       : CVector(chain[static_cast<std::size_t>(k)] * Y0);
    term *= factor;
    y += term;
    magnitudes.push_back(term.norm());
  }

  const double scale = std::max(y.norm(), 1e-300);
  const std::size_t last = magnitudes.size() - 1;
  const double final_tail = magnitudes[last];
  if (final_tail > 1e-15 * scale) {
    const double first_of_five = magnitudes[last - 4];
    if (!(final_tail < first_of_five))
      throw NonConvergenceError("taylor_solve: series terms not decreasing (|z| beyond the convergence range?)");
    if (final_tail > 1e-8 * scale)
      throw NonConvergenceError("taylor_solve: tail term still " + std::to_string(final_tail / scale) +
                                " of the solution after " + std::to_string(terms) + " terms");
  }
  return {y, final_tail, terms};
}

}  // namespace varode
