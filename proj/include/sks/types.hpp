#pragma once

#include <Eigen/Dense>

namespace sks {

using Index = Eigen::Index;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Point = Point2<double>;
using Vector = VectorX<double>;
using Barycentric = Eigen::Vector3d;

}  // namespace sks
