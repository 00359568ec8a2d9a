#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sks/assembly.hpp"
#include "sks/initial_data.hpp"
#include "sks/linalg.hpp"
#include "sks/mesh.hpp"
#include "sks/stochastic.hpp"

namespace sks {

/// Coefficients of
///   du = [nu Lap u - chi div(u grad c)] dt + delta b . grad u o dW,
///   Lap c = c - u,
/// on the torus of side L. The Stratonovich integral is discretized directly
/// by the midpoint rule; the Ito form (with drift 1/2 delta^2 div(b b^T grad u))
/// is not used.
struct ModelParams {
  double nu = 1.0;
  double chi = 1.0;
  double delta = 0.0;
  Point b = Point(1.0, 0.0);
  double L = 1.0;

  /// Throws std::invalid_argument unless nu > 0, chi >= 0, delta >= 0, all finite.
  void validate() const;
};

struct Discretization {
  Index N = 2;
  double k = 0.0;
  double T = 0.0;

  /// M = T / k; throws unless it is a non-negative integer to 1e-12 relative.
  Index steps() const;
};

/// Coefficients at time level m. `sigma_prev` holds sigma^{m-1} once a step
/// has been taken (empty at m = 0).
struct SchemeState {
  Index m = 0;
  Vector u;
  Vector sigma;
  Vector c;
  Vector sigma_prev;
};

struct StepDiagnostics {
  double mass = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double l2_u = 0.0;
  SolveReport sigma_solve;
  SolveReport u_solve;
  SolveReport c_solve;
};

/// A step whose linear solve failed; carries the step index and increment.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, Index step, double dW)
      : std::runtime_error(what), step_(step), dW_(dW) {}
  Index step() const { return step_; }
  double increment() const { return dW_; }

 private:
  Index step_;
  double dW_;
};

enum class SpdMethod { ConjugateGradient, Cholesky };
enum class GeneralMethod { SparseLU, BiCGSTAB };

struct SchemeOptions {
  /// Residual tolerance of the sigma- and c-solves and of the LU u-solve.
  double tolerance = kDefaultSolveTolerance;
  /// Solver for the constant sigma operator and the mass matrix.
  SpdMethod spd_method = SpdMethod::ConjugateGradient;
  /// Solver for the step-dependent u-system.
  GeneralMethod u_method = GeneralMethod::SparseLU;
  /// Residual tolerance of the BiCGSTAB u-solve. Mass drift per step is
  /// bounded by this residual, hence tighter than `tolerance`.
  double krylov_tolerance = 1e-13;
  /// Iteration budget before the BiCGSTAB u-solve falls back to LU.
  int krylov_max_iterations = 100;
};

/// Fully discrete Crank-Nicolson splitting mixed finite element scheme.
///
/// Per step: sigma^{m+1} from u^m (explicit coupling), then a linear
/// u-system with sigma^{m+1/2} frozen, then c^{m+1} recovered from
/// div sigma^{m+1} + u^{m+1}. Owns a reusable LU analysis, so one Scheme per
/// worker thread.
class Scheme {
 public:
  Scheme(const PeriodicMesh& mesh, const ModelParams& params, SchemeOptions options = {});

  const PeriodicMesh& mesh() const { return mesh_; }
  const FormMatrices& forms() const { return forms_; }
  const ModelParams& params() const { return params_; }

  /// u0 and c0 are L2-projected; sigma0 = grad c0 is projected in the
  /// (mass + div-div + rot-rot) inner product.
  SchemeState initialize(const InitialData& data) const;

  /// Solves A_sigma sigma^{m+1} = -B_mix u^m.
  SolveResult step_sigma(const SchemeState& state) const;

  /// Solves the Crank-Nicolson system for u^{m+1} given sigma^{m+1}.
  SolveResult step_u(const SchemeState& state, const Vector& sigma_next, double k, double dW);

  /// Solves M c^{m+1} = B_div sigma^{m+1} + M u^{m+1}.
  SolveResult step_c(const Vector& sigma_next, const Vector& u_next) const;

  /// One full step; throws StepFailure if any solve fails.
  StepDiagnostics advance(SchemeState& state, double k, double dW);

  StepDiagnostics diagnose(const SchemeState& state) const;

  /// The u-system matrix M + (k nu/2) K - (k chi/2) C(sigma_mid) - (delta dW/2) G.
  SparseMatrix u_system_matrix(const Vector& sigma_mid, double k, double dW) const;

 private:
  SolveResult solve_spd_operator(const SparseMatrix& a, const std::optional<SpdFactorization>& f,
                                 const Vector& rhs) const;

  PeriodicMesh mesh_;
  ModelParams params_;
  SchemeOptions options_;
  FormMatrices forms_;
  std::optional<SpdFactorization> sigma_factor_;
  std::optional<SpdFactorization> mass_factor_;
  GeneralSolver u_solver_;
};

/// (m, t_m, diagnostics, state) delivered after each completed step.
using StepObserver =
    std::function<void(Index m, double t, const StepDiagnostics& diag, const SchemeState& state)>;

struct RunResult {
  SchemeState final_state;
  std::vector<StepDiagnostics> diagnostics;
};

/// Runs M = T/k steps driven by increments of `path` over [t_m, t_m + k).
RunResult run(Scheme& scheme, const Discretization& disc, const WienerPath& path,
              SchemeState initial, const StepObserver& observer = {});

/// Sufficient stability condition 1 - 32 chi^2 C_L^4 T kappa1 / nu > 0 with
/// kappa1 = |u0|^2 + (3 chi^2 C_L^4 k / nu) |u0|^4. Advisory only.
struct StabilityReport {
  double kappa1 = 0.0;
  double value = 0.0;
  bool satisfied = false;
};

StabilityReport check_stability_criterion(const ModelParams& params, double T, double k,
                                          double u0_l2, double ladyzhenskaya_constant = 1.0);

}  // namespace sks
