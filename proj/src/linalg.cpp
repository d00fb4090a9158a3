#include "varode/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace varode {

void check_dimension(Eigen::Index n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("matrix dimension " + std::to_string(n) + " outside supported range 1.." +
                                std::to_string(kMaxDim));
}

HermitianEigen eig_hermitian(const CMatrix& H, double tol) {
  check_dimension(H.rows());
  if (H.cols() != H.rows()) throw std::invalid_argument("eig_hermitian: matrix must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale)
    throw NumericalError("eig_hermitian: matrix is not Hermitian (residual " + std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigen-solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<EigenTriple> eig_general(const CMatrix& M, double min_separation) {
  const Eigen::Index n = M.rows();
  check_dimension(n);
  if (M.cols() != n) throw std::invalid_argument("eig_general: matrix must be square");

  Eigen::ComplexEigenSolver<CMatrix> solver(M, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_general: eigen-solver failed");

  const Eigen::VectorXcd& values = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();

  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= min_separation * scale)
        throw DefectiveMatrixError("eig_general: eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                                   " are not separated; matrix is (near-)defective");

  Eigen::FullPivLU<CMatrix> lu(vectors);
  if (!lu.isInvertible() || lu.rcond() < 1e-13)
    throw DefectiveMatrixError("eig_general: eigenvector matrix is singular; matrix is (near-)defective");
  const CMatrix inverse = lu.inverse();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  std::vector<EigenTriple> out;
  out.reserve(order.size());
  for (Eigen::Index k : order) out.push_back({values(k), vectors.col(k), inverse.row(k).transpose()});
  return out;
}

CMatrix reconstruct(const std::vector<EigenTriple>& triples) {
  if (triples.empty()) return {};
  const Eigen::Index n = triples.front().right.size();
  CMatrix M = CMatrix::Zero(n, n);
  for (const auto& e : triples) M += e.value * e.right * e.left.transpose();
  return M;
}

}  // namespace varode
