#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sks/mesh.hpp"

using namespace sks;

TEST(Mesh, CountsAndAreasOnTwoByTwo) {
  const auto mesh = build_uniform(2, 1.0);
  EXPECT_EQ(mesh.num_vertices(), 4);
  EXPECT_EQ(mesh.num_triangles(), 8);
  for (Index t = 0; t < mesh.num_triangles(); ++t) EXPECT_NEAR(mesh.geometry(t).area, 1.0 / 8.0, 1e-15);
}

TEST(Mesh, MeshSizeAndTotalArea) {
  const auto mesh = build_uniform(4, 1.0);
  EXPECT_DOUBLE_EQ(mesh.mesh_size(), 0.25);
  double total = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) total += mesh.geometry(t).area;
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Mesh, RejectsTooCoarse) {
  EXPECT_THROW(build_uniform(1, 1.0), std::invalid_argument);
  EXPECT_THROW(build_uniform(0, 1.0), std::invalid_argument);
}

TEST(Mesh, PeriodicVertexIdentification) {
  const auto mesh = build_uniform(2, 1.0);
  const auto a = mesh.locate(Point(1.0, 0.5));
  const auto b = mesh.locate(Point(0.0, 0.5));
  // both land on the vertex class of (0, 0.5)
  auto vertex_of = [&](const Location& loc) {
    Index best = 0;
    loc.barycentric.maxCoeff(&best);
    return mesh.triangle(loc.triangle)[static_cast<std::size_t>(best)];
  };
  EXPECT_EQ(vertex_of(a), vertex_of(b));
  EXPECT_EQ(vertex_of(a), mesh.vertex_id(0, 1));
  EXPECT_EQ(mesh.vertex_id(2, 3), mesh.vertex_id(0, 1));
  EXPECT_EQ(mesh.vertex_id(-1, 0), mesh.vertex_id(1, 0));
}

TEST(Mesh, TrianglesAreCounterClockwise) {
  const auto mesh = build_uniform(5, 2.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& c = mesh.geometry(t).corners;
    const Point e1 = c[1] - c[0];
    const Point e2 = c[2] - c[0];
    EXPECT_GT(e1.x() * e2.y() - e1.y() * e2.x(), 0.0);
  }
}

TEST(Mesh, EveryVertexHasSixTriangles) {
  const auto mesh = build_uniform(6, 1.0);
  std::vector<int> count(static_cast<std::size_t>(mesh.num_vertices()), 0);
  for (Index t = 0; t < mesh.num_triangles(); ++t)
    for (Index v : mesh.triangle(t)) ++count[static_cast<std::size_t>(v)];
  for (int c : count) EXPECT_EQ(c, 6);
}

TEST(Mesh, GradientsOfBarycentricsSumToZero) {
  const auto mesh = build_uniform(3, 1.5);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& g = mesh.geometry(t);
    EXPECT_LT((g.gradients[0] + g.gradients[1] + g.gradients[2]).norm(), 1e-13);
    // grad(lambda_i) . (x_j - x_0) = delta_ij - delta_i0
    for (int i = 0; i < 3; ++i)
      for (int j = 1; j < 3; ++j)
        EXPECT_NEAR(g.gradients[i].dot(g.corners[j] - g.corners[0]), (i == j) - (i == 0), 1e-13);
  }
}

TEST(Refine, DoublesResolution) {
  const auto coarse = build_uniform(2, 1.0);
  const auto fine = refine(coarse);
  EXPECT_EQ(fine.num_vertices(), 16);
  EXPECT_EQ(fine.num_triangles(), 32);
  EXPECT_TRUE(is_refinement_of(fine, coarse));
  EXPECT_FALSE(is_refinement_of(coarse, fine));
  EXPECT_DOUBLE_EQ(refine(refine(coarse)).mesh_size(), 1.0 / 8.0);
}

TEST(Refine, CoarseVerticesAreFineVertices) {
  const auto coarse = build_uniform(3, 1.0);
  const auto fine = refine(coarse);
  for (Index v = 0; v < coarse.num_vertices(); ++v) {
    const auto loc = fine.locate(coarse.vertex(v));
    EXPECT_NEAR(loc.barycentric.maxCoeff(), 1.0, 1e-14);
  }
}

TEST(Locate, CentroidAndVertex) {
  const auto mesh = build_uniform(4, 1.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& c = mesh.geometry(t).corners;
    const Point centroid = (c[0] + c[1] + c[2]) / 3.0;
    const auto loc = mesh.locate(centroid);
    EXPECT_EQ(loc.triangle, t);
    EXPECT_LT((loc.barycentric - Barycentric::Constant(1.0 / 3.0)).norm(), 1e-13);
  }
  const auto loc = mesh.locate(mesh.vertex(5));
  EXPECT_NEAR(loc.barycentric.maxCoeff(), 1.0, 1e-15);
  EXPECT_NEAR(loc.barycentric.minCoeff(), 0.0, 1e-15);
}

TEST(Locate, WrapsPeriodically) {
  const double L = 1.0;
  const auto mesh = build_uniform(4, L);
  const auto a = locate(mesh, Point(L + 0.1, -0.2));
  const auto b = locate(mesh, Point(0.1, L - 0.2));
  EXPECT_EQ(a.triangle, b.triangle);
  EXPECT_LT((a.barycentric - b.barycentric).norm(), 1e-13);
}

TEST(Locate, PropertyReconstructsPoint) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto mesh = build_uniform(7, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Point p(u(rng), u(rng));
    const auto loc = mesh.locate(p);
    EXPECT_GE(loc.barycentric.minCoeff(), -1e-14);
    EXPECT_NEAR(loc.barycentric.sum(), 1.0, 1e-14);
    const Point q = mesh.geometry(loc.triangle).map(loc.barycentric);
    const Point w = mesh.wrap(p);
    EXPECT_LT((q - w).norm(), 1e-12);
  }
}
