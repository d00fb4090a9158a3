#pragma once

#include <complex>

#include <Eigen/Dense>

namespace varode {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Which side the driving matrix multiplies the state on.
///   Row:    Y' = Y M  (Y is a row vector)
///   Column: Y' = M Y
enum class Orientation { Row, Column };

inline constexpr int kMaxDim = 8;

inline const char* to_string(Orientation o) { return o == Orientation::Row ? "row" : "column"; }

}  // namespace varode
