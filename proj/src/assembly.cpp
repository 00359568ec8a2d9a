#include "sks/assembly.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include "sks/quadrature.hpp"

namespace sks {

namespace {

using Local3 = Eigen::Matrix3d;
using Local6 = Eigen::Matrix<double, 6, 6>;
using Local3x6 = Eigen::Matrix<double, 3, 6>;

// rot of the vector basis function Phi_(a, c): c = 0 gives (lambda_a, 0), c = 1 gives (0, lambda_a).
double rot_of_basis(const Point& grad, int component) {
  return component == 0 ? -grad.y() : grad.x();
}

double div_of_basis(const Point& grad, int component) { return grad[component]; }

void scatter(std::vector<Triplet>& out, const std::array<Index, 3>& v, const Local3& local) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      out.emplace_back(static_cast<int>(v[a]), static_cast<int>(v[b]), local(a, b));
    }
  }
}

std::array<Index, 6> vector_dofs(const std::array<Index, 3>& v) {
  return {vector_dof(v[0], 0), vector_dof(v[0], 1), vector_dof(v[1], 0),
          vector_dof(v[1], 1), vector_dof(v[2], 0), vector_dof(v[2], 1)};
}

}  // namespace

FormMatrices assemble_static(const PeriodicMesh& mesh, const Point& b) {
  if (!b.allFinite()) throw std::invalid_argument("assemble_static: noise direction must be finite");
  const auto rule = edge_midpoint_rule<double>();
  const Index nv = mesh.num_vertices();
  const Index nt = mesh.num_triangles();

  std::vector<Triplet> mass, stiff, vec, div, noise;
  mass.reserve(static_cast<std::size_t>(9 * nt));
  stiff.reserve(static_cast<std::size_t>(9 * nt));
  noise.reserve(static_cast<std::size_t>(9 * nt));
  vec.reserve(static_cast<std::size_t>(36 * nt));
  div.reserve(static_cast<std::size_t>(18 * nt));

  for (Index t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& geo = mesh.geometry(t);
    const auto& g = geo.gradients;

    Local3 m_loc = Local3::Zero(), k_loc = Local3::Zero(), g_loc = Local3::Zero();
    Local6 a_loc = Local6::Zero();
    Local3x6 d_loc = Local3x6::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& lam = rule.points[q];
      const double w = rule.weights[q] * geo.area;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          m_loc(i, j) += w * lam[i] * lam[j];
          k_loc(i, j) += w * g[i].dot(g[j]);
          g_loc(i, j) += w * b.dot(g[j]) * lam[i];
          for (int c = 0; c < 2; ++c) {
            d_loc(i, 2 * j + c) += w * div_of_basis(g[j], c) * lam[i];
            for (int d = 0; d < 2; ++d) {
              double value = w * (div_of_basis(g[i], c) * div_of_basis(g[j], d) +
                                  rot_of_basis(g[i], c) * rot_of_basis(g[j], d));
              if (c == d) value += w * lam[i] * lam[j];
              a_loc(2 * i + c, 2 * j + d) += value;
            }
          }
        }
      }
    }

    scatter(mass, tri, m_loc);
    scatter(stiff, tri, k_loc);
    scatter(noise, tri, g_loc);
    const auto vd = vector_dofs(tri);
    for (int r = 0; r < 6; ++r) {
      for (int s = 0; s < 6; ++s) {
        vec.emplace_back(static_cast<int>(vd[r]), static_cast<int>(vd[s]), a_loc(r, s));
      }
    }
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 6; ++s) {
        div.emplace_back(static_cast<int>(tri[r]), static_cast<int>(vd[s]), d_loc(r, s));
      }
    }
  }

  FormMatrices forms;
  forms.mass = from_triplets(nv, nv, mass);
  forms.stiffness = from_triplets(nv, nv, stiff);
  forms.noise = from_triplets(nv, nv, noise);
  forms.vector_operator = from_triplets(2 * nv, 2 * nv, vec);
  forms.divergence = from_triplets(nv, 2 * nv, div);
  forms.mix = SparseMatrix(forms.divergence.transpose());
  forms.mix.makeCompressed();
  forms.mass_row_sums = forms.mass * Vector::Ones(nv);
  forms.b = b;
  forms.quadrature_degree = rule.degree;
  return forms;
}

SparseMatrix assemble_convection(const PeriodicMesh& mesh, const Vector& sigma) {
  const Index nv = mesh.num_vertices();
  if (sigma.size() != 2 * nv) {
    throw std::invalid_argument("assemble_convection: expected " + std::to_string(2 * nv) +
                                " sigma coefficients, got " + std::to_string(sigma.size()));
  }
  const auto rule = edge_midpoint_rule<double>();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(9 * mesh.num_triangles()));
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& geo = mesh.geometry(t);
    std::array<Point, 3> s;
    for (int a = 0; a < 3; ++a) {
      s[a] = Point(sigma[vector_dof(tri[a], 0)], sigma[vector_dof(tri[a], 1)]);
    }
    Local3 c_loc = Local3::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& lam = rule.points[q];
      const double w = rule.weights[q] * geo.area;
      const Point sq = lam[0] * s[0] + lam[1] * s[1] + lam[2] * s[2];
      for (int i = 0; i < 3; ++i) {
        const double flux = sq.dot(geo.gradients[i]);
        for (int j = 0; j < 3; ++j) c_loc(i, j) += w * lam[j] * flux;
      }
    }
    scatter(entries, tri, c_loc);
  }
  return from_triplets(nv, nv, entries);
}

Vector project_scalar(const PeriodicMesh& mesh, const ScalarFunction& f) {
  return project_scalar(mesh, assemble_static(mesh, Point::Zero()), f);
}

Vector project_scalar(const PeriodicMesh& mesh, const FormMatrices& forms, const ScalarFunction& f) {
  const auto rule = six_point_rule<double>();
  Vector load = Vector::Zero(mesh.num_vertices());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& lam = rule.points[q];
      const double wf = rule.weights[q] * geo.area * f(geo.map(lam));
      for (int a = 0; a < 3; ++a) load[tri[a]] += wf * lam[a];
    }
  }
  return solve_spd(forms.mass, load).x;
}

Vector project_vector(const PeriodicMesh& mesh, const VectorField& g) {
  return project_vector(mesh, assemble_static(mesh, Point::Zero()), g);
}

Vector project_vector(const PeriodicMesh& mesh, const FormMatrices& forms, const VectorField& g) {
  const auto rule = six_point_rule<double>();
  Vector load = Vector::Zero(2 * mesh.num_vertices());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& geo = mesh.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& lam = rule.points[q];
      const double w = rule.weights[q] * geo.area;
      const Point x = geo.map(lam);
      const Point value = g.value(x);
      const double div = g.divergence ? g.divergence(x) : 0.0;
      const double rot = g.rot ? g.rot(x) : 0.0;
      for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 2; ++c) {
          load[vector_dof(tri[a], c)] +=
              w * (value[c] * lam[a] + div * div_of_basis(geo.gradients[a], c) +
                   rot * rot_of_basis(geo.gradients[a], c));
        }
      }
    }
  }
  return solve_spd(forms.vector_operator, load).x;
}

Vector interpolate_scalar(const PeriodicMesh& mesh, const ScalarFunction& f) {
  Vector values(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) values[v] = f(mesh.vertex(v));
  return values;
}

}  // namespace sks
