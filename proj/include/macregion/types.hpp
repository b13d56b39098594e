#pragma once

#include <Eigen/Core>

namespace macregion {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// One 2-D point per row: column 0 is r1 (or a1), column 1 is r2 (or a2).
template <class Scalar>
using PointList = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

template <class Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

} // namespace macregion
