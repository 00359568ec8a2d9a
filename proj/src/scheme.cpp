#include "sks/scheme.hpp"

#include <cmath>

namespace sks {

void ModelParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("ModelParams: nu must be > 0");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw std::invalid_argument("ModelParams: chi must be >= 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("ModelParams: delta must be >= 0");
  if (!b.allFinite()) throw std::invalid_argument("ModelParams: b must be finite");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("ModelParams: L must be > 0");
}

Index Discretization::steps() const {
  if (T == 0.0) return 0;
  return integer_ratio(T, k, "Discretization: T / k");
}

Scheme::Scheme(const PeriodicMesh& mesh, const ModelParams& params, SchemeOptions options)
    : mesh_(mesh), params_(params), options_(options) {
  params_.validate();
  if (mesh_.side_length() != params_.L) {
    throw std::invalid_argument("Scheme: mesh side length differs from the model period L");
  }
  forms_ = assemble_static(mesh_, params_.b);
  if (options_.spd_method == SpdMethod::Cholesky) {
    sigma_factor_.emplace(forms_.vector_operator);
    mass_factor_.emplace(forms_.mass);
  }
}

SolveResult Scheme::solve_spd_operator(const SparseMatrix& a,
                                       const std::optional<SpdFactorization>& f,
                                       const Vector& rhs) const {
  if (f) return f->solve(rhs, options_.tolerance);
  return solve_spd(a, rhs, options_.tolerance);
}

SchemeState Scheme::initialize(const InitialData& data) const {
  SchemeState state;
  state.m = 0;
  state.u = project_scalar(mesh_, forms_, data.u0);
  state.sigma = project_vector(mesh_, forms_, data.sigma0());
  state.c = project_scalar(mesh_, forms_, data.c0);
  return state;
}

SolveResult Scheme::step_sigma(const SchemeState& state) const {
  const Vector rhs = -(forms_.mix * state.u);
  return solve_spd_operator(forms_.vector_operator, sigma_factor_, rhs);
}

SparseMatrix Scheme::u_system_matrix(const Vector& sigma_mid, double k, double dW) const {
  SparseMatrix a = forms_.mass + (0.5 * k * params_.nu) * forms_.stiffness;
  if (params_.chi != 0.0) {
    a -= (0.5 * k * params_.chi) * assemble_convection(mesh_, sigma_mid);
  }
  if (params_.delta != 0.0) {
    a -= (0.5 * params_.delta * dW) * forms_.noise;
  }
  return a;
}

SolveResult Scheme::step_u(const SchemeState& state, const Vector& sigma_next, double k, double dW) {
  const Vector sigma_mid = 0.5 * (sigma_next + state.sigma);
  const Vector& u = state.u;

  Vector rhs = forms_.mass * u - (0.5 * k * params_.nu) * (forms_.stiffness * u);
  SparseMatrix lhs = forms_.mass + (0.5 * k * params_.nu) * forms_.stiffness;
  if (params_.chi != 0.0) {
    const SparseMatrix conv = assemble_convection(mesh_, sigma_mid);
    rhs += (0.5 * k * params_.chi) * (conv * u);
    lhs -= (0.5 * k * params_.chi) * conv;
  }
  if (params_.delta != 0.0) {
    // Kept even when dW == 0 so the sparsity pattern, and with it the LU
    // analysis, stays fixed across steps.
    const double s = 0.5 * params_.delta * dW;
    rhs += s * (forms_.noise * u);
    lhs -= s * forms_.noise;
  }
  if (options_.u_method == GeneralMethod::BiCGSTAB) {
    // BiCGSTAB can break down when the noise term dominates the mass matrix
    // (large delta dW on coarse meshes); the LU path is the fallback.
    try {
      return solve_general_krylov(lhs, rhs, u, options_.krylov_tolerance, options_.krylov_max_iterations);
    } catch (const SolveError&) {
    }
  }
  return u_solver_.solve(lhs, rhs, options_.tolerance);
}

SolveResult Scheme::step_c(const Vector& sigma_next, const Vector& u_next) const {
  const Vector rhs = forms_.divergence * sigma_next + forms_.mass * u_next;
  return solve_spd_operator(forms_.mass, mass_factor_, rhs);
}

StepDiagnostics Scheme::advance(SchemeState& state, double k, double dW) {
  StepDiagnostics diag;
  const char* stage = "sigma";
  try {
    SolveResult sigma = step_sigma(state);
    stage = "u";
    SolveResult u = step_u(state, sigma.x, k, dW);
    stage = "c";
    SolveResult c = step_c(sigma.x, u.x);

    state.sigma_prev = std::move(state.sigma);
    state.sigma = std::move(sigma.x);
    state.u = std::move(u.x);
    state.c = std::move(c.x);
    state.m += 1;

    diag = diagnose(state);
    diag.sigma_solve = sigma.report;
    diag.u_solve = u.report;
    diag.c_solve = c.report;
  } catch (const SolveError& e) {
    throw StepFailure(std::string("step ") + std::to_string(state.m) + " (" + stage +
                          "-solve, dW = " + std::to_string(dW) + "): " + e.what(),
                      state.m, dW);
  }
  return diag;
}

StepDiagnostics Scheme::diagnose(const SchemeState& state) const {
  StepDiagnostics diag;
  diag.mass = forms_.mass_row_sums.dot(state.u);
  diag.min_u = state.u.minCoeff();
  diag.max_u = state.u.maxCoeff();
  diag.l2_u = std::sqrt(std::max(0.0, state.u.dot(forms_.mass * state.u)));
  return diag;
}

RunResult run(Scheme& scheme, const Discretization& disc, const WienerPath& path,
              SchemeState initial, const StepObserver& observer) {
  if (disc.N != scheme.mesh().cells_per_side()) {
    throw std::invalid_argument("run: discretization N does not match the mesh");
  }
  const Index steps = disc.steps();
  RunResult result;
  result.final_state = std::move(initial);
  if (steps == 0) return result;

  const Index stride = path.steps_per(disc.k);
  if (steps * stride > path.size()) {
    throw std::invalid_argument("run: Wiener path is shorter than the time horizon");
  }
  result.diagnostics.reserve(static_cast<std::size_t>(steps));
  SchemeState& state = result.final_state;
  for (Index m = 0; m < steps; ++m) {
    const double dW = path.increment_steps(m * stride, (m + 1) * stride);
    StepDiagnostics diag = scheme.advance(state, disc.k, dW);
    if (observer) observer(m + 1, static_cast<double>(m + 1) * disc.k, diag, state);
    result.diagnostics.push_back(diag);
  }
  return result;
}

StabilityReport check_stability_criterion(const ModelParams& params, double T, double k,
                                          double u0_l2, double ladyzhenskaya_constant) {
  const double cl4 = std::pow(ladyzhenskaya_constant, 4);
  const double chi2 = params.chi * params.chi;
  const double n2 = u0_l2 * u0_l2;
  StabilityReport report;
  report.kappa1 = n2 + (3.0 * chi2 * cl4 * k / params.nu) * n2 * n2;
  report.value = 1.0 - 32.0 * chi2 * cl4 * T * report.kappa1 / params.nu;
  report.satisfied = report.value > 0.0;
  return report;
}

}  // namespace sks
