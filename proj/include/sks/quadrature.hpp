#pragma once

#include <vector>

#include "sks/types.hpp"

namespace sks {

/// Quadrature on a triangle in barycentric coordinates. Weights sum to one and
/// are scaled by the triangle area at the point of use.
template <typename Scalar>
struct TriangleRule {
  std::vector<Eigen::Matrix<Scalar, 3, 1>> points;
  std::vector<Scalar> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Edge midpoints; exact for polynomials of degree 2.
template <typename Scalar = double>
TriangleRule<Scalar> edge_midpoint_rule() {
  using P = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar half(0.5);
  const Scalar third = Scalar(1) / Scalar(3);
  return {{P(half, half, 0), P(0, half, half), P(half, 0, half)}, {third, third, third}, 2};
}

/// Six-point symmetric rule, exact for polynomials of degree 4.
template <typename Scalar = double>
TriangleRule<Scalar> six_point_rule() {
  using P = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar a1 = Scalar(0.445948490915965), b1 = Scalar(1) - 2 * a1;
  const Scalar a2 = Scalar(0.091576213509771), b2 = Scalar(1) - 2 * a2;
  const Scalar w1 = Scalar(0.223381589678011);
  const Scalar w2 = Scalar(1) / Scalar(3) - w1;
  return {{P(b1, a1, a1), P(a1, b1, a1), P(a1, a1, b1), P(b2, a2, a2), P(a2, b2, a2), P(a2, a2, b2)},
          {w1, w1, w1, w2, w2, w2},
          4};
}

}  // namespace sks
