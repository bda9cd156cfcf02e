#pragma once

#include <Eigen/Dense>

namespace bswarm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Packed local information [vec(P); q], column-major vec.
using Phi6 = Eigen::Matrix<double, 6, 1>;

/// One row per node, one column per packed coordinate.
using SignalMatrix = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;

inline constexpr int kSignalDim = 6;

}  // namespace bswarm
