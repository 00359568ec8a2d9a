#pragma once

#include <array>
#include <functional>
#include <vector>

#include "sks/mesh.hpp"

namespace sks::verify {

using DenseMatrix = Eigen::MatrixXd;

/// Dense brute-force counterparts of every assembled form. Each triangle's
/// affine map is inverted directly and the integrands are evaluated pointwise
/// with a 12-point degree-6 rule; nothing is shared with the sparse assembly
/// beyond the mesh connectivity.
struct DenseForms {
  DenseMatrix mass;
  DenseMatrix stiffness;
  DenseMatrix vector_operator;
  DenseMatrix mix;
  DenseMatrix divergence;
  DenseMatrix noise;
};

DenseForms dense_static_forms(const PeriodicMesh& mesh, const Point& b);
DenseMatrix dense_convection(const PeriodicMesh& mesh, const Vector& sigma);

/// Integral of f over the reference-free triangle with the given corners,
/// 12-point degree-6 rule.
double integrate_degree6(const std::array<Point, 3>& corners, const std::function<double(const Point&)>& f);

/// Discrete Fourier mode cos(2 pi (p i + q j) / N) sampled at the vertices.
Vector fourier_mode(const PeriodicMesh& mesh, Index p, Index q);

struct ModeSymbol {
  Index p = 0;
  Index q = 0;
  /// Rayleigh quotient v^T K v / v^T M v.
  double lambda = 0.0;
  /// |K v - lambda M v| / |K v|, zero when v is a generalized eigenvector.
  double eigen_residual = 0.0;
  /// Distance from lambda to the nearest eigenvalue of the dense pencil.
  double spectrum_distance = 0.0;
};

/// Generalized eigenvalues of (K, M) for every Fourier mode 0 <= p, q < N,
/// checked against a dense eigensolve of the pencil.
std::vector<ModeSymbol> heat_mode_symbols(const PeriodicMesh& mesh);

/// Crank-Nicolson amplification factor for the heat equation.
inline double crank_nicolson_amplification(double k, double nu, double lambda) {
  return (1.0 - 0.5 * k * nu * lambda) / (1.0 + 0.5 * k * nu * lambda);
}

}  // namespace sks::verify
