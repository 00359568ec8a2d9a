#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>

#include "sks/types.hpp"

namespace sks {

/// Compressed-row sparse matrix. Column indices are sorted within each row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

struct SolveReport {
  int iterations = 0;  // 0 for direct solves
  double residual = 0.0;  // ||Ax - b|| / ||b||, or ||Ax|| when b = 0
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Raised when a solver cannot meet its residual contract.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

inline constexpr double kDefaultSolveTolerance = 1e-10;

/// Builds a canonical CSR matrix; duplicate entries are summed in input order.
SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries);

Vector spmv(const SparseMatrix& a, const Vector& x);

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

/// Unpreconditioned conjugate gradients for symmetric positive definite `a`.
SolveResult solve_spd(const SparseMatrix& a, const Vector& b,
                      double tol = kDefaultSolveTolerance, int max_iter = 0);

/// Sparse LU with partial pivoting.
SolveResult solve_general(const SparseMatrix& a, const Vector& b,
                          double tol = kDefaultSolveTolerance);

/// BiCGSTAB with a diagonal preconditioner, started from `guess`. Restarts
/// until the true relative residual meets `tol`; throws SolveError otherwise.
SolveResult solve_general_krylov(const SparseMatrix& a, const Vector& b, const Vector& guess,
                                 double tol = kDefaultSolveTolerance, int max_iter = 0);

/// Sparse LU that keeps the symbolic analysis between solves with the same
/// sparsity pattern. The u-system changes every step but its pattern does not.
class GeneralSolver {
 public:
  GeneralSolver();
  ~GeneralSolver();
  GeneralSolver(GeneralSolver&&) noexcept;
  GeneralSolver& operator=(GeneralSolver&&) noexcept;

  SolveResult solve(const SparseMatrix& a, const Vector& b, double tol = kDefaultSolveTolerance);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Cholesky (LDL^T) factorization of a fixed SPD matrix, for operators that
/// are solved against many right-hand sides.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SparseMatrix& a);
  ~SpdFactorization();
  SpdFactorization(SpdFactorization&&) noexcept;
  SpdFactorization& operator=(SpdFactorization&&) noexcept;

  SolveResult solve(const Vector& b, double tol = kDefaultSolveTolerance) const;
  const SparseMatrix& matrix() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sks
