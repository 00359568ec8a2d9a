#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sks/types.hpp"

namespace sks::verify {

struct SuiteResult {
  std::string name;
  bool passed = false;
  /// Worst observed value of the checked quantity.
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Every sparse form (static forms for `b_draws` random b plus convection for
/// random sigma) against the dense oracle, max-entry error <= tol.
SuiteResult assembly_oracle_suite(const std::vector<Index>& sizes, int b_draws = 3, double tol = 1e-12,
                                  std::uint64_t seed = 1);

/// Random (nu, chi, delta, b) draws; relative mass drift at every step <= tol.
SuiteResult mass_conservation_suite(int draws = 20, Index N = 8, Index steps = 64, double tol = 1e-9,
                                    std::uint64_t seed = 2);

/// chi = 0 pathwise identity |u^{m+1}|^2 + 2 k nu |grad u^{m+1/2}|^2 = |u^m|^2.
SuiteResult energy_identity_suite(int draws = 10, Index N = 8, Index steps = 32, double tol = 1e-9,
                                  std::uint64_t seed = 3);

/// delta = chi = 0: one step of every Fourier mode matches the dense
/// generalized-eigenvalue amplification, for every N in `sizes`.
SuiteResult heat_amplification_suite(const std::vector<Index>& sizes = {2, 3, 4, 5, 6, 7, 8},
                                     double tol = 1e-10);

/// delta = chi = 0 self-convergence of u in L2 (max over time), k = h,
/// against the paired (2N, k/4) reference; passes when the fitted rate is
/// within `rate_tol` of 2.
SuiteResult heat_convergence_suite(const std::vector<Index>& sizes = {4, 8, 16, 32}, double rate_tol = 0.3);

std::vector<SuiteResult> run_selftest();

}  // namespace sks::verify
