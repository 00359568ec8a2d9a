#include "sks/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace sks {

namespace {

void require_nested(const PeriodicMesh& coarse, const PeriodicMesh& fine, const char* who) {
  // any N' = pN on the same torus contains the coarse triangulation
  if (fine.side_length() != coarse.side_length() || fine.cells_per_side() % coarse.cells_per_side() != 0) {
    throw std::invalid_argument(std::string(who) + ": fine mesh is not nested in the coarse mesh");
  }
}

double quadratic_norm(const SparseMatrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("norm: coefficient vector has wrong length");
  return std::sqrt(std::max(0.0, x.dot(a * x)));
}

}  // namespace

Vector prolong_scalar(const PeriodicMesh& coarse, const Vector& coeffs, const PeriodicMesh& fine) {
  require_nested(coarse, fine, "prolong_scalar");
  if (coeffs.size() != coarse.num_vertices()) throw std::invalid_argument("prolong_scalar: wrong length");
  Vector out(fine.num_vertices());
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    const Location loc = coarse.locate(fine.vertex(v));
    const auto& tri = coarse.triangle(loc.triangle);
    out[v] = loc.barycentric[0] * coeffs[tri[0]] + loc.barycentric[1] * coeffs[tri[1]] +
             loc.barycentric[2] * coeffs[tri[2]];
  }
  return out;
}

Vector prolong_vector(const PeriodicMesh& coarse, const Vector& coeffs, const PeriodicMesh& fine) {
  require_nested(coarse, fine, "prolong_vector");
  if (coeffs.size() != 2 * coarse.num_vertices()) throw std::invalid_argument("prolong_vector: wrong length");
  Vector out(2 * fine.num_vertices());
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    const Location loc = coarse.locate(fine.vertex(v));
    const auto& tri = coarse.triangle(loc.triangle);
    for (int c = 0; c < 2; ++c) {
      out[vector_dof(v, c)] = loc.barycentric[0] * coeffs[vector_dof(tri[0], c)] +
                              loc.barycentric[1] * coeffs[vector_dof(tri[1], c)] +
                              loc.barycentric[2] * coeffs[vector_dof(tri[2], c)];
    }
  }
  return out;
}

double l2_disc(const FormMatrices& forms, const Vector& coeffs) { return quadratic_norm(forms.mass, coeffs); }

double l2_disc(const PeriodicMesh& mesh, const Vector& coeffs) {
  return l2_disc(assemble_static(mesh, Point::Zero()), coeffs);
}

double h1_equiv_disc(const FormMatrices& forms, const Vector& coeffs) {
  return quadratic_norm(forms.vector_operator, coeffs);
}

double h1_equiv_disc(const PeriodicMesh& mesh, const Vector& coeffs) {
  return h1_equiv_disc(assemble_static(mesh, Point::Zero()), coeffs);
}

double h1_semi_disc(const FormMatrices& forms, const Vector& coeffs) {
  return quadratic_norm(forms.stiffness, coeffs);
}

PathErrorAccumulator::PathErrorAccumulator(const PeriodicMesh& coarse, const PeriodicMesh& fine)
    : coarse_(coarse), fine_(fine) {
  require_nested(coarse_, fine_, "PathErrorAccumulator");
  fine_forms_ = assemble_static(fine_, Point::Zero());
}

void PathErrorAccumulator::add(const Vector& coarse_u, const Vector& coarse_sigma,
                               const Vector& coarse_c, const Vector& ref_u,
                               const Vector& ref_sigma, const Vector& ref_c) {
  const double eu = l2_disc(fine_forms_, ref_u - prolong_scalar(coarse_, coarse_u, fine_));
  const double ec = l2_disc(fine_forms_, ref_c - prolong_scalar(coarse_, coarse_c, fine_));
  const double es = h1_equiv_disc(fine_forms_, ref_sigma - prolong_vector(coarse_, coarse_sigma, fine_));
  max_.u = std::max(max_.u, eu);
  max_.c = std::max(max_.c, ec);
  max_.sigma = std::max(max_.sigma, es);
}

FieldErrors path_error(const PeriodicMesh& coarse_mesh, const TrajectoryRecord& coarse,
                       const PeriodicMesh& fine_mesh, const TrajectoryRecord& ref) {
  if (coarse.cells_per_side != coarse_mesh.cells_per_side() ||
      ref.cells_per_side != fine_mesh.cells_per_side()) {
    throw std::invalid_argument("path_error: trajectory does not belong to the given mesh");
  }
  PathErrorAccumulator acc(coarse_mesh, fine_mesh);
  std::size_t r = 0;
  for (std::size_t m = 0; m < coarse.size(); ++m) {
    const double t = coarse.times[m];
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    while (r < ref.size() && ref.times[r] < t - tol) ++r;
    if (r == ref.size() || std::abs(ref.times[r] - t) > tol) {
      throw std::invalid_argument("path_error: reference has no snapshot at t = " + std::to_string(t));
    }
    if (m == 0 && t == 0.0) continue;  // the max runs over m >= 1
    acc.add(coarse.u[m], coarse.sigma[m], coarse.c[m], ref.u[r], ref.sigma[r], ref.c[r]);
  }
  return acc.errors();
}

double mc_aggregate(std::span<const double> sample_errors) {
  if (sample_errors.empty()) throw std::invalid_argument("mc_aggregate: no samples");
  double sum = 0.0;
  for (double e : sample_errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(sample_errors.size()));
}

}  // namespace sks
