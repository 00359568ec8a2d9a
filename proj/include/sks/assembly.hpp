#pragma once

#include <functional>

#include "sks/linalg.hpp"
#include "sks/mesh.hpp"

namespace sks {

/// Degrees of freedom. Scalar fields carry one coefficient per vertex; vector
/// fields are interleaved, two per vertex.
inline Index vector_dof(Index vertex, int component) { return 2 * vertex + component; }

/// Time-independent bilinear forms over the periodic P1 spaces.
struct FormMatrices {
  /// (u, v)
  SparseMatrix mass;
  /// (grad u, grad v)
  SparseMatrix stiffness;
  /// (s, p) + (div s, div p) + (rot s, rot p), rot s = d s2/dx - d s1/dy
  SparseMatrix vector_operator;
  /// Rows: vector test functions, cols: scalar trial functions;
  /// entry (psi_j, div Phi_i). Equal to divergence^T.
  SparseMatrix mix;
  /// Rows: scalar test functions, cols: vector trial functions;
  /// entry (div Phi_j, psi_i).
  SparseMatrix divergence;
  /// Noise form, entry (b . grad phi_j, phi_i). Antisymmetric on the torus.
  SparseMatrix noise;
  /// Row sums of `mass`, i.e. the integrals of the basis functions.
  Vector mass_row_sums;
  Point b = Point::Zero();
  int quadrature_degree = 0;
};

FormMatrices assemble_static(const PeriodicMesh& mesh, const Point& b);

/// C(sigma) with entries integral of phi_j (sigma_h . grad phi_i): test function
/// i, trial function j, sigma_h the P1 field with the given coefficients.
SparseMatrix assemble_convection(const PeriodicMesh& mesh, const Vector& sigma);

using ScalarFunction = std::function<double(const Point&)>;

/// A vector field with its divergence and rot available in closed form. An
/// empty divergence or rot callable stands for an identically zero one.
struct VectorField {
  std::function<Point(const Point&)> value;
  ScalarFunction divergence;
  ScalarFunction rot;
};

/// L2 projection onto P1; the load vector uses the degree-4 six-point rule.
Vector project_scalar(const PeriodicMesh& mesh, const ScalarFunction& f);
Vector project_scalar(const PeriodicMesh& mesh, const FormMatrices& forms, const ScalarFunction& f);

/// Projection onto vector P1 in the (mass + div-div + rot-rot) inner product.
Vector project_vector(const PeriodicMesh& mesh, const VectorField& g);
Vector project_vector(const PeriodicMesh& mesh, const FormMatrices& forms, const VectorField& g);

/// Nodal values of the interpolant of f (used for Fourier-mode data).
Vector interpolate_scalar(const PeriodicMesh& mesh, const ScalarFunction& f);

}  // namespace sks
