#include "sks/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace sks {

namespace {

using ColMajorMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

void check_square(const SparseMatrix& a, const Vector& b, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  }
  if (a.rows() != b.size()) {
    throw std::invalid_argument(std::string(who) + ": right-hand side has wrong length");
  }
}

SolveResult finish_direct(Vector x, const SparseMatrix& a, const Vector& b, double tol,
                          const char* who) {
  SolveReport report;
  report.residual = relative_residual(a, x, b);
  report.converged = std::isfinite(report.residual) && report.residual <= tol;
  if (!report.converged) {
    throw SolveError(std::string(who) + ": residual " + std::to_string(report.residual) +
                         " exceeds tolerance",
                     report);
  }
  return {std::move(x), report};
}

}  // namespace

SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("from_triplets: negative dimension");
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols) {
      throw std::invalid_argument("from_triplets: index (" + std::to_string(t.row()) + ", " +
                                  std::to_string(t.col()) + ") out of range");
    }
  }
  SparseMatrix a(rows, cols);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

Vector spmv(const SparseMatrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
  return a * x;
}

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double r = (a * x - b).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

SolveResult solve_spd(const SparseMatrix& a, const Vector& b, double tol, int max_iter) {
  check_square(a, b, "solve_spd");
  if (b.isZero(0.0)) return {Vector::Zero(b.size()), {0, 0.0, true}};

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::IdentityPreconditioner>
      cg;
  const int budget = max_iter > 0 ? max_iter : static_cast<int>(std::max<Index>(2 * a.rows(), 10));
  cg.setTolerance(tol);
  cg.compute(a);

  // Eigen stops on the recursively updated residual, which can drift from the
  // true one; restart from the current iterate until the true residual meets
  // the tolerance or the iteration budget is spent.
  SolveReport report;
  Vector x = Vector::Zero(b.size());
  while (true) {
    cg.setMaxIterations(budget - report.iterations);
    x = cg.solveWithGuess(b, x);
    report.iterations += static_cast<int>(cg.iterations());
    report.residual = relative_residual(a, x, b);
    report.converged = std::isfinite(report.residual) && report.residual <= tol;
    if (report.converged || report.iterations >= budget || cg.iterations() == 0) break;
  }
  if (!report.converged) {
    throw SolveError("solve_spd: no convergence after " + std::to_string(report.iterations) +
                         " iterations (residual " + std::to_string(report.residual) + ")",
                     report);
  }
  return {std::move(x), report};
}

SolveResult solve_general(const SparseMatrix& a, const Vector& b, double tol) {
  GeneralSolver solver;
  return solver.solve(a, b, tol);
}

SolveResult solve_general_krylov(const SparseMatrix& a, const Vector& b, const Vector& guess,
                                 double tol, int max_iter) {
  check_square(a, b, "solve_general_krylov");
  if (guess.size() != b.size()) throw std::invalid_argument("solve_general_krylov: guess has wrong length");
  if (b.isZero(0.0)) return {Vector::Zero(b.size()), {0, 0.0, true}};

  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> solver;
  const int budget = max_iter > 0 ? max_iter : static_cast<int>(std::max<Index>(2 * a.rows(), 10));
  solver.setTolerance(tol);
  solver.compute(a);

  SolveReport report;
  Vector x = guess;
  report.residual = relative_residual(a, x, b);
  while (!(report.residual <= tol) && report.iterations < budget) {
    solver.setMaxIterations(budget - report.iterations);
    x = solver.solveWithGuess(b, x);
    report.iterations += static_cast<int>(solver.iterations());
    report.residual = relative_residual(a, x, b);
    if (solver.iterations() == 0 || !std::isfinite(report.residual)) break;
  }
  report.converged = std::isfinite(report.residual) && report.residual <= tol;
  if (!report.converged) {
    throw SolveError("solve_general_krylov: no convergence after " + std::to_string(report.iterations) +
                         " iterations (residual " + std::to_string(report.residual) + ")",
                     report);
  }
  return {std::move(x), report};
}

struct GeneralSolver::Impl {
  Eigen::SparseLU<ColMajorMatrix, Eigen::COLAMDOrdering<int>> lu;
  ColMajorMatrix pattern;
  bool analyzed = false;
};

GeneralSolver::GeneralSolver() : impl_(std::make_unique<Impl>()) {}
GeneralSolver::~GeneralSolver() = default;
GeneralSolver::GeneralSolver(GeneralSolver&&) noexcept = default;
GeneralSolver& GeneralSolver::operator=(GeneralSolver&&) noexcept = default;

SolveResult GeneralSolver::solve(const SparseMatrix& a, const Vector& b, double tol) {
  check_square(a, b, "solve_general");
  ColMajorMatrix ac = a;
  ac.makeCompressed();

  const bool same_pattern =
      impl_->analyzed && impl_->pattern.rows() == ac.rows() &&
      impl_->pattern.nonZeros() == ac.nonZeros() &&
      std::equal(ac.outerIndexPtr(), ac.outerIndexPtr() + ac.outerSize() + 1,
                 impl_->pattern.outerIndexPtr()) &&
      std::equal(ac.innerIndexPtr(), ac.innerIndexPtr() + ac.nonZeros(),
                 impl_->pattern.innerIndexPtr());
  if (!same_pattern) {
    impl_->lu.analyzePattern(ac);
    impl_->pattern = ac;
    impl_->analyzed = true;
  }
  impl_->lu.factorize(ac);
  if (impl_->lu.info() != Eigen::Success) {
    throw SolveError("solve_general: singular matrix (" + impl_->lu.lastErrorMessage() + ")",
                     {0, std::numeric_limits<double>::infinity(), false});
  }
  Vector x = impl_->lu.solve(b);
  return finish_direct(std::move(x), a, b, tol, "solve_general");
}

struct SpdFactorization::Impl {
  SparseMatrix a;
  Eigen::SimplicialLDLT<ColMajorMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

SpdFactorization::SpdFactorization(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SpdFactorization: matrix is not square");
  impl_->a = a;
  ColMajorMatrix ac = a;
  impl_->ldlt.compute(ac);
  if (impl_->ldlt.info() != Eigen::Success) {
    throw SolveError("SpdFactorization: factorization failed",
                     {0, std::numeric_limits<double>::infinity(), false});
  }
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

SolveResult SpdFactorization::solve(const Vector& b, double tol) const {
  check_square(impl_->a, b, "SpdFactorization::solve");
  Vector x = impl_->ldlt.solve(b);
  return finish_direct(std::move(x), impl_->a, b, tol, "SpdFactorization::solve");
}

const SparseMatrix& SpdFactorization::matrix() const { return impl_->a; }

}  // namespace sks
