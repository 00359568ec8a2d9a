#pragma once

#include <array>
#include <vector>

#include "sks/types.hpp"

namespace sks {

/// Cached geometry of one triangle. Corners are stored unwrapped, i.e. as the
/// triangle actually sits in the plane, so triangles straddling the periodic
/// seam still have a proper shape.
struct TriangleGeometry {
  std::array<Point, 3> corners;
  /// Constant gradients of the three barycentric functions.
  std::array<Point, 3> gradients;
  double area = 0.0;

  Point map(const Barycentric& lambda) const {
    return lambda[0] * corners[0] + lambda[1] * corners[1] + lambda[2] * corners[2];
  }
};

struct Location {
  Index triangle = 0;
  Barycentric barycentric = Barycentric::Zero();
};

/// Uniform triangulation of the torus [0,L)^2.
///
/// The square is cut into N x N cells; every cell is split along the diagonal
/// from its lower-left to its upper-right corner. Grid node (i, j) is
/// identified with vertex (i mod N) + N (j mod N), so there are N^2 vertices
/// and 2 N^2 counterclockwise triangles. Cell (i, j) owns triangles 2c and
/// 2c+1 with c = i + N j: the lower one (00, 10, 11) and the upper one
/// (00, 11, 01).
///
/// Immutable after construction.
class PeriodicMesh {
 public:
  PeriodicMesh(Index cells_per_side, double side_length);

  Index cells_per_side() const { return n_; }
  double side_length() const { return length_; }
  double mesh_size() const { return length_ / static_cast<double>(n_); }

  Index num_vertices() const { return n_ * n_; }
  Index num_triangles() const { return 2 * n_ * n_; }

  /// Representative coordinate of a vertex class, in [0,L)^2.
  Point vertex(Index v) const;
  /// Vertex id of grid node (i, j); i and j may be any integers.
  Index vertex_id(Index i, Index j) const;

  const std::array<Index, 3>& triangle(Index t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const TriangleGeometry& geometry(Index t) const { return geometry_[static_cast<std::size_t>(t)]; }

  /// Maps any point of the plane into [0,L)^2.
  Point wrap(const Point& p) const;

  Location locate(const Point& p) const;

  bool operator==(const PeriodicMesh& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  Index n_;
  double length_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<TriangleGeometry> geometry_;
};

/// Throws std::invalid_argument for N < 2 or a non-positive length.
PeriodicMesh build_uniform(Index cells_per_side, double side_length);

/// Nested refinement: every cell is split into four, giving N' = 2N.
PeriodicMesh refine(const PeriodicMesh& mesh);

/// Triangle containing `point` (after wrapping) and its barycentric coordinates.
Location locate(const PeriodicMesh& mesh, const Point& point);

/// True when `fine` is the nested refinement of `coarse`.
bool is_refinement_of(const PeriodicMesh& fine, const PeriodicMesh& coarse);

}  // namespace sks
