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

double max_diff(const SparseMatrix& a, const Eigen::MatrixXd& b) {
  return (Eigen::MatrixXd(a.toDense()) - b).cwiseAbs().maxCoeff();
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST(Assembly, ElementMassMatchesBarycentricIntegrals) {
  // Oracle: integrate lambda_i lambda_j directly with the degree-6 rule.
  const auto mesh = build_uniform(3, 1.7);
  const auto& g = mesh.geometry(4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double v = verify::integrate_degree6(g.corners, [&](const Point& p) {
        auto lam = [&](int a) { return 1.0 / 3.0 + g.gradients[a].dot(p - (g.corners[0] + g.corners[1] + g.corners[2]) / 3.0); };
        return lam(i) * lam(j);
      });
      EXPECT_NEAR(v, g.area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0), 1e-15);
    }
  }
}

TEST(Assembly, MatchesDenseOracle) {
  std::mt19937_64 rng(1);
  for (Index N : {2, 3, 4}) {
    const auto mesh = build_uniform(N, 1.0 + 0.25 * static_cast<double>(N));
    const Point b(0.3 * static_cast<double>(N), -0.7);
    const auto f = assemble_static(mesh, b);
    const auto d = verify::dense_static_forms(mesh, b);
    EXPECT_LT(max_diff(f.mass, d.mass), 1e-12);
    EXPECT_LT(max_diff(f.stiffness, d.stiffness), 1e-12);
    EXPECT_LT(max_diff(f.vector_operator, d.vector_operator), 1e-12);
    EXPECT_LT(max_diff(f.mix, d.mix), 1e-12);
    EXPECT_LT(max_diff(f.divergence, d.divergence), 1e-12);
    EXPECT_LT(max_diff(f.noise, d.noise), 1e-12);
    const Vector sigma = random_vector(2 * mesh.num_vertices(), rng);
    EXPECT_LT(max_diff(assemble_convection(mesh, sigma), verify::dense_convection(mesh, sigma)), 1e-12);
  }
}

TEST(Assembly, StructuralIdentities) {
  const auto mesh = build_uniform(5, 1.0);
  const auto f = assemble_static(mesh, Point(1.0, 0.0));
  const Vector one = Vector::Ones(mesh.num_vertices());
  EXPECT_NEAR(f.mass_row_sums.sum(), 1.0, 1e-14);
  EXPECT_LT((f.mass * one - f.mass_row_sums).norm(), 1e-15);
  EXPECT_LT((f.stiffness * one).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((f.noise * one).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::MatrixXd g = f.noise.toDense();
  EXPECT_LT((g + g.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ((Eigen::MatrixXd(f.mix.toDense()) - Eigen::MatrixXd(f.divergence.toDense()).transpose()).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::MatrixXd m = f.mass.toDense();
  EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff(), 0.0);
  const Eigen::MatrixXd a = f.vector_operator.toDense();
  EXPECT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff(), 0.0);
}

TEST(Convection, ZeroAndConstantFields) {
  const auto mesh = build_uniform(4, 1.0);
  const Index n = mesh.num_vertices();
  EXPECT_EQ(assemble_convection(mesh, Vector::Zero(2 * n)).norm(), 0.0);
  Vector sigma = Vector::Zero(2 * n);
  for (Index v = 0; v < n; ++v) sigma[vector_dof(v, 0)] = 1.0;
  const SparseMatrix c = assemble_convection(mesh, sigma);
  // row sums of C^T: sum_j C[j, i] = int sigma . grad(sum phi_j) ... vanish by periodicity
  const Vector col_sums = c.transpose() * Vector::Ones(n);
  EXPECT_LT(col_sums.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(assemble_convection(mesh, Vector::Zero(n)), std::invalid_argument);
}

TEST(Convection, EqualsTransposedNoiseOnTwoByTwo) {
  const auto mesh = build_uniform(2, 1.0);
  const Index n = mesh.num_vertices();
  Vector sigma = Vector::Zero(2 * n);
  for (Index v = 0; v < n; ++v) sigma[vector_dof(v, 0)] = 1.0;
  const auto f = assemble_static(mesh, Point(1.0, 0.0));
  const Eigen::MatrixXd c = assemble_convection(mesh, sigma).toDense();
  const Eigen::MatrixXd gt = Eigen::MatrixXd(f.noise.toDense()).transpose();
  EXPECT_LT((c - gt).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Convection, PropertyConstantFieldMatchesNoiseTranspose) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mesh = build_uniform(3 + trial % 4, 1.0);
    const Point b(u(rng), u(rng));
    Vector sigma(2 * mesh.num_vertices());
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
      sigma[vector_dof(v, 0)] = b.x();
      sigma[vector_dof(v, 1)] = b.y();
    }
    const Eigen::MatrixXd c = assemble_convection(mesh, sigma).toDense();
    const Eigen::MatrixXd g = assemble_static(mesh, b).noise.toDense();
    EXPECT_LT((c - g.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Projection, ScalarExamples) {
  const auto mesh = build_uniform(6, 1.0);
  const Vector one = project_scalar(mesh, [](const Point&) { return 1.0; });
  EXPECT_LT((one - Vector::Ones(mesh.num_vertices())).cwiseAbs().maxCoeff(), 1e-9);
  const Vector zero = project_scalar(mesh, [](const Point&) { return 0.0; });
  EXPECT_TRUE(zero.isZero(0.0));
}

TEST(Projection, ScalarSelfConvergenceIsSecondOrder) {
  const ScalarFunction f = [](const Point& p) { return std::sin(2 * pi * p.x()); };
  const auto ref_mesh = build_uniform(128, 1.0);
  const Vector ref = project_scalar(ref_mesh, f);
  std::vector<double> hs, errs;
  for (Index N : {8, 16, 32}) {
    const auto mesh = build_uniform(N, 1.0);
    // nodal values approach the projection coefficients
    const Vector p = project_scalar(mesh, f);
    const Vector up = prolong_scalar(mesh, p, ref_mesh);
    hs.push_back(1.0 / static_cast<double>(N));
    errs.push_back(l2_disc(ref_mesh, ref - up));
    EXPECT_LT((p - interpolate_scalar(mesh, f)).cwiseAbs().maxCoeff(), 2.0 * std::pow(2 * pi / static_cast<double>(N), 2));
  }
  const double r1 = std::log2(errs[0] / errs[1]);
  const double r2 = std::log2(errs[1] / errs[2]);
  EXPECT_NEAR(r1, 2.0, 0.25);
  EXPECT_NEAR(r2, 2.0, 0.25);
}

TEST(Projection, VectorExamples) {
  const auto mesh = build_uniform(4, 1.0);
  const Index n = mesh.num_vertices();
  VectorField g;
  g.value = [](const Point&) { return Point(1.0, 0.0); };
  const Vector s = project_vector(mesh, g);
  for (Index v = 0; v < n; ++v) {
    EXPECT_NEAR(s[vector_dof(v, 0)], 1.0, 1e-9);
    EXPECT_NEAR(s[vector_dof(v, 1)], 0.0, 1e-9);
  }
  VectorField zero;
  zero.value = [](const Point&) { return Point(0.0, 0.0); };
  EXPECT_TRUE(project_vector(mesh, zero).isZero(0.0));
}

TEST(Projection, GradientSelfConvergenceIsFirstOrder) {
  VectorField g;
  g.value = [](const Point& p) {
    return Point(2 * pi * std::cos(2 * pi * p.x()) * std::sin(2 * pi * p.y()),
                 2 * pi * std::sin(2 * pi * p.x()) * std::cos(2 * pi * p.y()));
  };
  g.divergence = [](const Point& p) { return -8 * pi * pi * std::sin(2 * pi * p.x()) * std::sin(2 * pi * p.y()); };
  const auto ref_mesh = build_uniform(128, 1.0);
  const auto ref_forms = assemble_static(ref_mesh, Point::Zero());
  const Vector ref = project_vector(ref_mesh, ref_forms, g);
  std::vector<double> errs;
  for (Index N : {8, 16, 32}) {
    const auto mesh = build_uniform(N, 1.0);
    const Vector s = project_vector(mesh, g);
    errs.push_back(h1_equiv_disc(ref_forms, ref - prolong_vector(mesh, s, ref_mesh)));
  }
  EXPECT_NEAR(std::log2(errs[0] / errs[1]), 1.0, 0.3);
  EXPECT_NEAR(std::log2(errs[1] / errs[2]), 1.0, 0.3);
}
