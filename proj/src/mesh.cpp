#include "sks/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sks {

namespace {

Index positive_mod(Index a, Index n) {
  const Index r = a % n;
  return r < 0 ? r + n : r;
}

TriangleGeometry make_geometry(const std::array<Point, 3>& corners) {
  TriangleGeometry g;
  g.corners = corners;
  const Point e1 = corners[1] - corners[0];
  const Point e2 = corners[2] - corners[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  g.area = 0.5 * det;
  // grad(lambda_i) = rot90(opposite edge) / (2 area), counterclockwise.
  for (int i = 0; i < 3; ++i) {
    const Point& a = corners[static_cast<std::size_t>((i + 1) % 3)];
    const Point& b = corners[static_cast<std::size_t>((i + 2) % 3)];
    g.gradients[static_cast<std::size_t>(i)] = Point(a.y() - b.y(), b.x() - a.x()) / det;
  }
  return g;
}

}  // namespace

PeriodicMesh::PeriodicMesh(Index cells_per_side, double side_length)
    : n_(cells_per_side), length_(side_length) {
  if (n_ < 2) {
    throw std::invalid_argument("PeriodicMesh: cells per side must be >= 2, got " +
                                std::to_string(n_));
  }
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw std::invalid_argument("PeriodicMesh: side length must be positive and finite");
  }
  const double h = mesh_size();
  triangles_.reserve(static_cast<std::size_t>(num_triangles()));
  geometry_.reserve(static_cast<std::size_t>(num_triangles()));
  for (Index j = 0; j < n_; ++j) {
    for (Index i = 0; i < n_; ++i) {
      const Point p00(static_cast<double>(i) * h, static_cast<double>(j) * h);
      const Point p10 = p00 + Point(h, 0.0);
      const Point p11 = p00 + Point(h, h);
      const Point p01 = p00 + Point(0.0, h);
      const Index v00 = vertex_id(i, j);
      const Index v10 = vertex_id(i + 1, j);
      const Index v11 = vertex_id(i + 1, j + 1);
      const Index v01 = vertex_id(i, j + 1);
      triangles_.push_back({v00, v10, v11});
      geometry_.push_back(make_geometry({p00, p10, p11}));
      triangles_.push_back({v00, v11, v01});
      geometry_.push_back(make_geometry({p00, p11, p01}));
    }
  }
}

Index PeriodicMesh::vertex_id(Index i, Index j) const {
  return positive_mod(i, n_) + n_ * positive_mod(j, n_);
}

Point PeriodicMesh::vertex(Index v) const {
  const double h = mesh_size();
  return {static_cast<double>(v % n_) * h, static_cast<double>(v / n_) * h};
}

Point PeriodicMesh::wrap(const Point& p) const {
  Point w;
  for (int d = 0; d < 2; ++d) {
    double x = p[d] - length_ * std::floor(p[d] / length_);
    // floor() can leave x == L when p[d] is a tiny negative number.
    if (x >= length_) x = 0.0;
    w[d] = x;
  }
  return w;
}

Location PeriodicMesh::locate(const Point& p) const {
  const Point w = wrap(p);
  const double h = mesh_size();
  const double sx = w.x() / h;
  const double sy = w.y() / h;
  const Index i = std::clamp<Index>(static_cast<Index>(std::floor(sx)), 0, n_ - 1);
  const Index j = std::clamp<Index>(static_cast<Index>(std::floor(sy)), 0, n_ - 1);
  const double fx = std::clamp(sx - static_cast<double>(i), 0.0, 1.0);
  const double fy = std::clamp(sy - static_cast<double>(j), 0.0, 1.0);
  const Index cell = i + n_ * j;
  Location loc;
  if (fx >= fy) {
    loc.triangle = 2 * cell;
    loc.barycentric = Barycentric(1.0 - fx, fx - fy, fy);
  } else {
    loc.triangle = 2 * cell + 1;
    loc.barycentric = Barycentric(1.0 - fy, fx, fy - fx);
  }
  return loc;
}

PeriodicMesh build_uniform(Index cells_per_side, double side_length) {
  return PeriodicMesh(cells_per_side, side_length);
}

PeriodicMesh refine(const PeriodicMesh& mesh) {
  if (mesh.cells_per_side() > std::numeric_limits<Index>::max() / 4) {
    throw std::overflow_error("refine: cells per side overflows");
  }
  return PeriodicMesh(2 * mesh.cells_per_side(), mesh.side_length());
}

Location locate(const PeriodicMesh& mesh, const Point& point) { return mesh.locate(point); }

bool is_refinement_of(const PeriodicMesh& fine, const PeriodicMesh& coarse) {
  return fine.side_length() == coarse.side_length() &&
         fine.cells_per_side() == 2 * coarse.cells_per_side();
}

}  // namespace sks
