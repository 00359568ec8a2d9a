#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sks/assembly.hpp"
#include "sks/norms.hpp"
#include "sks/verify/oracle.hpp"

using namespace sks;
using std::numbers::pi;

namespace {

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

TrajectoryRecord record_of(const PeriodicMesh& mesh, int steps, double k, double u_value) {
  TrajectoryRecord r;
  r.cells_per_side = mesh.cells_per_side();
  const Index n = mesh.num_vertices();
  for (int m = 0; m <= steps; ++m)
    r.push(m * k, Vector::Constant(n, u_value), Vector::Zero(2 * n), Vector::Constant(n, u_value));
  return r;
}

}  // namespace

TEST(Norms, ConstantFunctions) {
  for (double L : {1.0, 2.0}) {
    const auto mesh = build_uniform(4, L);
    EXPECT_NEAR(l2_disc(mesh, Vector::Constant(mesh.num_vertices(), 3.0)), 3.0 * L, 1e-13);
  }
  const auto mesh = build_uniform(4, 1.0);
  Vector sigma = Vector::Zero(2 * mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) sigma[vector_dof(v, 0)] = 1.0;
  EXPECT_NEAR(h1_equiv_disc(mesh, sigma), 1.0, 1e-13);
}

TEST(Norms, SineModeNorm) {
  const auto mesh = build_uniform(32, 1.0);
  const auto f = [](const Point& p) { return std::sin(2 * pi * p.x()); };
  const Vector u = project_scalar(mesh, f);
  const double value = l2_disc(mesh, u);
  EXPECT_NEAR(value, 1.0 / std::sqrt(2.0), 0.02 / std::sqrt(2.0));
  // oracle: degree-6 quadrature of (u_h - f)^2 bounds the gap between norms
  double err2 = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& g = mesh.geometry(t);
    const auto& tri = mesh.triangle(t);
    err2 += verify::integrate_degree6(g.corners, [&](const Point& p) {
      const Point c = (g.corners[0] + g.corners[1] + g.corners[2]) / 3.0;
      double uh = 0.0;
      for (int i = 0; i < 3; ++i) uh += u[tri[static_cast<std::size_t>(i)]] * (1.0 / 3.0 + g.gradients[i].dot(p - c));
      return (uh - f(p)) * (uh - f(p));
    });
  }
  EXPECT_LE(std::abs(value - 1.0 / std::sqrt(2.0)), std::sqrt(err2) + 1e-12);
}

TEST(Norms, H1EquivalentDominatesL2) {
  std::mt19937_64 rng(2);
  const auto mesh = build_uniform(6, 1.0);
  const auto forms = assemble_static(mesh, Point::Zero());
  for (int i = 0; i < 10; ++i) {
    const Vector s = random_vector(2 * mesh.num_vertices(), rng);
    const double l2 = std::sqrt(s.dot(verify::dense_static_forms(mesh, Point::Zero()).vector_operator * s));
    EXPECT_NEAR(h1_equiv_disc(forms, s), l2, 1e-12 * l2);
  }
}

TEST(Prolongation, ConstantsAndExactEmbedding) {
  std::mt19937_64 rng(6);
  for (Index N : {2, 3, 4, 8, 16}) {
    const auto coarse = build_uniform(N, 1.0);
    const auto fine = refine(coarse);
    const Vector one = prolong_scalar(coarse, Vector::Constant(coarse.num_vertices(), 2.0), fine);
    EXPECT_LT((one - Vector::Constant(fine.num_vertices(), 2.0)).cwiseAbs().maxCoeff(), 1e-14);

    const Vector u = random_vector(coarse.num_vertices(), rng);
    const Vector uf = prolong_scalar(coarse, u, fine);
    for (Index j = 0; j < N; ++j)
      for (Index i = 0; i < N; ++i)
        EXPECT_NEAR(uf[fine.vertex_id(2 * i, 2 * j)], u[coarse.vertex_id(i, j)], 1e-14);
    // the fine P1 function equals the coarse one, so their norms agree
    EXPECT_NEAR(l2_disc(fine, uf), l2_disc(coarse, u), 1e-13 * l2_disc(coarse, u));

    const Vector s = random_vector(2 * coarse.num_vertices(), rng);
    const Vector sf = prolong_vector(coarse, s, fine);
    EXPECT_NEAR(h1_equiv_disc(fine, sf), h1_equiv_disc(coarse, s), 1e-12 * h1_equiv_disc(coarse, s));
  }
  EXPECT_THROW(prolong_scalar(build_uniform(4, 1.0), Vector::Zero(16), build_uniform(6, 1.0)), std::invalid_argument);
  EXPECT_THROW(prolong_scalar(build_uniform(4, 1.0), Vector::Zero(16), build_uniform(8, 2.0)), std::invalid_argument);
}

TEST(PathError, IdenticalAndOffsetTrajectories) {
  const double L = 2.0;
  const auto coarse = build_uniform(4, L);
  const auto fine = refine(coarse);
  const auto ref = record_of(fine, 8, 0.125, 1.0);
  auto same = record_of(coarse, 2, 0.5, 1.0);
  const auto zero = path_error(coarse, same, fine, ref);
  EXPECT_EQ(zero.u, 0.0);
  EXPECT_EQ(zero.c, 0.0);
  EXPECT_EQ(zero.sigma, 0.0);

  const double eps = 1e-3;
  same.u[1].array() += eps;
  const auto e = path_error(coarse, same, fine, ref);
  EXPECT_NEAR(e.u, eps * L, 1e-14);
  EXPECT_EQ(e.c, 0.0);

  // a discrepancy only at t = 0 is ignored
  auto initial_only = record_of(coarse, 2, 0.5, 1.0);
  initial_only.u[0].array() += 1.0;
  EXPECT_EQ(path_error(coarse, initial_only, fine, ref).u, 0.0);

  auto misaligned = record_of(coarse, 2, 0.3, 1.0);
  EXPECT_THROW(path_error(coarse, misaligned, fine, ref), std::invalid_argument);
}

TEST(McAggregate, Examples) {
  const std::vector<double> equal{0.2, 0.2, 0.2};
  EXPECT_NEAR(mc_aggregate(equal), 0.2, 1e-16);
  const std::vector<double> pair{3.0, 4.0};
  EXPECT_NEAR(mc_aggregate(pair), std::sqrt(12.5), 1e-15);
  const std::vector<double> one{0.7};
  EXPECT_DOUBLE_EQ(mc_aggregate(one), 0.7);
  EXPECT_THROW(mc_aggregate(std::vector<double>{}), std::invalid_argument);
}
