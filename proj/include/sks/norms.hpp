#pragma once

#include <span>
#include <vector>

#include "sks/assembly.hpp"
#include "sks/mesh.hpp"

namespace sks {

/// Embeds a coarse P1 function into the P1 space of the nested refinement.
/// Throws std::invalid_argument unless `fine` refines `coarse`.
Vector prolong_scalar(const PeriodicMesh& coarse, const Vector& coeffs, const PeriodicMesh& fine);
Vector prolong_vector(const PeriodicMesh& coarse, const Vector& coeffs, const PeriodicMesh& fine);

/// sqrt(x^T M x).
double l2_disc(const FormMatrices& forms, const Vector& coeffs);
double l2_disc(const PeriodicMesh& mesh, const Vector& coeffs);

/// sqrt(x^T A_sigma x): |s|^2 + |div s|^2 + |rot s|^2, the H1-equivalent norm.
double h1_equiv_disc(const FormMatrices& forms, const Vector& coeffs);
double h1_equiv_disc(const PeriodicMesh& mesh, const Vector& coeffs);

/// sqrt(x^T K x), the H1 seminorm of a scalar field.
double h1_semi_disc(const FormMatrices& forms, const Vector& coeffs);

/// Coefficient snapshots at the comparison times of one run.
struct TrajectoryRecord {
  Index cells_per_side = 0;
  std::vector<double> times;
  std::vector<Vector> u;
  std::vector<Vector> sigma;
  std::vector<Vector> c;

  void push(double t, const Vector& u_m, const Vector& sigma_m, const Vector& c_m) {
    times.push_back(t);
    u.push_back(u_m);
    sigma.push_back(sigma_m);
    c.push_back(c_m);
  }
  std::size_t size() const { return times.size(); }
};

struct FieldErrors {
  double u = 0.0;
  double c = 0.0;
  double sigma = 0.0;
};

/// Running max-in-time error between a coarse run and a reference run on the
/// nested refinement. Coarse snapshots are prolonged, norms are taken on the
/// fine mesh.
class PathErrorAccumulator {
 public:
  PathErrorAccumulator(const PeriodicMesh& coarse, const PeriodicMesh& fine);

  /// Folds in the difference at one shared time.
  void add(const Vector& coarse_u, const Vector& coarse_sigma, const Vector& coarse_c,
           const Vector& ref_u, const Vector& ref_sigma, const Vector& ref_c);

  const FieldErrors& errors() const { return max_; }
  const FormMatrices& fine_forms() const { return fine_forms_; }

 private:
  PeriodicMesh coarse_;
  PeriodicMesh fine_;
  FormMatrices fine_forms_;
  FieldErrors max_;
};

/// max over shared times t_m, m >= 1, of the fine-mesh norms of
/// (reference - prolonged coarse). The reference must contain every coarse time.
FieldErrors path_error(const PeriodicMesh& coarse_mesh, const TrajectoryRecord& coarse,
                       const PeriodicMesh& fine_mesh, const TrajectoryRecord& ref);

/// Root-mean-square over samples. Throws std::invalid_argument on an empty list.
double mc_aggregate(std::span<const double> sample_errors);

}  // namespace sks
