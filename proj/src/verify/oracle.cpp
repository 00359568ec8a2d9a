#include "sks/verify/oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace sks::verify {

namespace {

struct Rule12 {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
};

// Dunavant's 12-point rule, exact through degree 6.
const Rule12& degree6_rule() {
  static const Rule12 rule = [] {
    Rule12 r;
    auto orbit3 = [&r](double a, double w) {
      const double b = (1.0 - a) / 2.0;
      r.points.emplace_back(a, b, b);
      r.points.emplace_back(b, a, b);
      r.points.emplace_back(b, b, a);
      for (int i = 0; i < 3; ++i) r.weights.push_back(w);
    };
    auto orbit6 = [&r](double a, double b, double w) {
      const double c = 1.0 - a - b;
      for (const auto& p : {Eigen::Vector3d(a, b, c), Eigen::Vector3d(a, c, b), Eigen::Vector3d(b, a, c),
                            Eigen::Vector3d(b, c, a), Eigen::Vector3d(c, a, b), Eigen::Vector3d(c, b, a)}) {
        r.points.push_back(p);
        r.weights.push_back(w);
      }
    };
    orbit3(0.501426509658179, 0.116786275726379);
    orbit3(0.873821971016996, 0.050844906370207);
    orbit6(0.053145049844817, 0.310352451033784, 0.082851075618374);
    return r;
  }();
  return rule;
}

// Affine barycentric map of one triangle: lambda(x) = coeff * [1, x, y].
struct Affine {
  Eigen::Matrix3d coeff;
  double area = 0.0;

  explicit Affine(const std::array<Point, 3>& corners) {
    Eigen::Matrix3d v;
    for (int a = 0; a < 3; ++a) v.col(a) << 1.0, corners[a].x(), corners[a].y();
    coeff = v.inverse();
    area = 0.5 * std::abs(v.determinant());
  }
  Eigen::Vector3d values(const Point& x) const { return coeff * Eigen::Vector3d(1.0, x.x(), x.y()); }
  Point gradient(int a) const { return {coeff(a, 1), coeff(a, 2)}; }
};

template <typename Body>
void for_each_quadrature_point(const PeriodicMesh& mesh, Body&& body) {
  const Rule12& rule = degree6_rule();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& corners = mesh.geometry(t).corners;
    const Affine map(corners);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Eigen::Vector3d& r = rule.points[q];
      const Point x = r[0] * corners[0] + r[1] * corners[1] + r[2] * corners[2];
      body(mesh.triangle(t), map, x, rule.weights[q] * map.area);
    }
  }
}

double rot_basis(const Point& g, int c) { return c == 0 ? -g.y() : g.x(); }

}  // namespace

double integrate_degree6(const std::array<Point, 3>& corners, const std::function<double(const Point&)>& f) {
  const Rule12& rule = degree6_rule();
  const Affine map(corners);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Eigen::Vector3d& r = rule.points[q];
    sum += rule.weights[q] * f(r[0] * corners[0] + r[1] * corners[1] + r[2] * corners[2]);
  }
  return sum * map.area;
}

DenseForms dense_static_forms(const PeriodicMesh& mesh, const Point& b) {
  const Index n = mesh.num_vertices();
  DenseForms f;
  f.mass = DenseMatrix::Zero(n, n);
  f.stiffness = DenseMatrix::Zero(n, n);
  f.noise = DenseMatrix::Zero(n, n);
  f.vector_operator = DenseMatrix::Zero(2 * n, 2 * n);
  f.mix = DenseMatrix::Zero(2 * n, n);
  f.divergence = DenseMatrix::Zero(n, 2 * n);

  for_each_quadrature_point(mesh, [&](const std::array<Index, 3>& tri, const Affine& map, const Point& x, double w) {
    const Eigen::Vector3d lam = map.values(x);
    for (int i = 0; i < 3; ++i) {
      const Point gi = map.gradient(i);
      for (int j = 0; j < 3; ++j) {
        const Point gj = map.gradient(j);
        f.mass(tri[i], tri[j]) += w * lam[i] * lam[j];
        f.stiffness(tri[i], tri[j]) += w * gi.dot(gj);
        f.noise(tri[i], tri[j]) += w * b.dot(gj) * lam[i];
        for (int c = 0; c < 2; ++c) {
          // (div Phi_(j,c), psi_i) and (psi_j, div Phi_(i,c))
          f.divergence(tri[i], 2 * tri[j] + c) += w * gj[c] * lam[i];
          f.mix(2 * tri[i] + c, tri[j]) += w * lam[j] * gi[c];
          for (int d = 0; d < 2; ++d) {
            const double vm = c == d ? lam[i] * lam[j] : 0.0;
            f.vector_operator(2 * tri[i] + c, 2 * tri[j] + d) +=
                w * (vm + gi[c] * gj[d] + rot_basis(gi, c) * rot_basis(gj, d));
          }
        }
      }
    }
  });
  return f;
}

DenseMatrix dense_convection(const PeriodicMesh& mesh, const Vector& sigma) {
  const Index n = mesh.num_vertices();
  DenseMatrix c = DenseMatrix::Zero(n, n);
  for_each_quadrature_point(mesh, [&](const std::array<Index, 3>& tri, const Affine& map, const Point& x, double w) {
    const Eigen::Vector3d lam = map.values(x);
    Point s = Point::Zero();
    for (int a = 0; a < 3; ++a) s += lam[a] * Point(sigma[2 * tri[a]], sigma[2 * tri[a] + 1]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) c(tri[i], tri[j]) += w * lam[j] * s.dot(map.gradient(i));
    }
  });
  return c;
}

Vector fourier_mode(const PeriodicMesh& mesh, Index p, Index q) {
  const Index n = mesh.cells_per_side();
  Vector v(mesh.num_vertices());
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(p * i + q * j) / static_cast<double>(n);
      v[mesh.vertex_id(i, j)] = std::cos(phase);
    }
  }
  return v;
}

std::vector<ModeSymbol> heat_mode_symbols(const PeriodicMesh& mesh) {
  const DenseForms f = dense_static_forms(mesh, Point::Zero());
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> pencil(f.stiffness, f.mass, Eigen::EigenvaluesOnly);
  const Vector spectrum = pencil.eigenvalues();

  std::vector<ModeSymbol> out;
  const Index n = mesh.cells_per_side();
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      const Vector v = fourier_mode(mesh, p, q);
      ModeSymbol s;
      s.p = p;
      s.q = q;
      const Vector kv = f.stiffness * v;
      const Vector mv = f.mass * v;
      s.lambda = v.dot(kv) / v.dot(mv);
      const double scale = std::max(kv.norm(), mv.norm());
      s.eigen_residual = (kv - s.lambda * mv).norm() / scale;
      s.spectrum_distance = (spectrum.array() - s.lambda).abs().minCoeff();
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace sks::verify
