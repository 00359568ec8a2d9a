#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sks/norms.hpp"
#include "sks/scheme.hpp"

namespace sks {

struct Level {
  Index N = 2;
  double k = 0.0;

  double h(double L) const { return L / static_cast<double>(N); }
};

struct ExperimentConfig {
  /// 1-4 for the built-in tests, 0 for a custom study.
  int test_id = 0;
  ModelParams params;
  double T = 1.0;
  /// Coarse levels; each is compared against the reference (2N, k/4).
  std::vector<Level> levels;
  /// Output times of the blow-up study.
  std::vector<double> final_times;
  Index samples = 400;
  std::uint64_t base_seed = 0;
  /// Requested Wiener resolution; the path is generated at
  /// min(k0, smallest step of the study).
  double k0 = 1.0 / 2048.0;
  std::string initial_data = "sin_pi";
  /// Initial data are evaluated at mesh coordinate + origin.
  Point origin = Point::Zero();
  std::string output_dir = "out";
  /// Worker threads across samples; 0 means all hardware threads.
  unsigned threads = 0;
  /// Harness defaults favour throughput; SchemeOptions keeps CG/LU defaults.
  SpdMethod spd_method = SpdMethod::Cholesky;
  GeneralMethod u_method = GeneralMethod::BiCGSTAB;
  double tolerance = kDefaultSolveTolerance;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Solver settings of a configuration.
SchemeOptions scheme_options(const ExperimentConfig& config);

/// Time step of the reference run paired with a coarse step.
inline double reference_step(double k) { return k / 4.0; }

/// Wiener resolution actually used by a convergence or inverse-k study.
double path_resolution(const ExperimentConfig& config);

struct LevelResult {
  Level level;
  double h = 0.0;
  Index samples = 0;
  Index excluded = 0;
  /// Root-mean-square over samples of the max-in-time errors.
  FieldErrors error;
  /// Message of the first excluded sample, if any.
  std::string first_failure;
  /// Rate against the previous level; empty on the first level.
  std::optional<FieldErrors> local_rate;
};

struct ErrorReport {
  std::vector<LevelResult> levels;
  /// Least-squares log-log slope over all levels; empty with fewer than two.
  std::optional<FieldErrors> fitted_rate;
  Index samples = 0;
  std::uint64_t base_seed = 0;
  double path_resolution = 0.0;
  /// Samples whose coarse increments failed to telescope to W(T) exactly.
  Index coupling_violations = 0;
  double wall_seconds = 0.0;

  Index total_excluded() const;
};

/// Paired coarse/reference strong-error study, with rate fits against h.
ErrorReport convergence_study(const ExperimentConfig& config);

/// Same protocol at fixed N over a list of time steps; no rate fit.
ErrorReport inverse_k_study(const ExperimentConfig& config);

struct BlowupSnapshot {
  double t = 0.0;
  Index samples = 0;
  /// Pathwise nodal extremes over all samples.
  double min_u = 0.0;
  double max_u = 0.0;
  /// Mass and sup norm of the sample-mean field E[u_h^M].
  double mass = 0.0;
  double linf_mean_field = 0.0;
  Vector mean_u;
};

struct BlowupSeriesRow {
  Index m = 0;
  double t = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double mean_mass = 0.0;
};

struct BlowupReport {
  Index cells_per_side = 0;
  double L = 1.0;
  Point origin = Point::Zero();
  double initial_mass = 0.0;
  std::vector<BlowupSnapshot> snapshots;
  std::vector<BlowupSeriesRow> series;
  Index samples = 0;
  Index excluded = 0;
  double wall_seconds = 0.0;
};

/// One run per sample up to the largest output time on the first level,
/// capturing the sample-mean density at every output time.
BlowupReport blowup_study(const ExperimentConfig& config);

/// Least-squares slope of log(error) against log(h). Throws
/// std::invalid_argument with fewer than two pairs or nonpositive values.
double estimate_rate(std::span<const double> hs, std::span<const double> errors);

/// Runs fn(j) for j in [0, count) on up to `threads` workers (0: hardware
/// concurrency). Exceptions are rethrown after all workers stop.
void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& fn);

void write_convergence_csv(std::ostream& out, const ErrorReport& report);
void write_inverse_k_csv(std::ostream& out, const ErrorReport& report);
void write_blowup_csv(std::ostream& out, const BlowupReport& report);
void write_blowup_series_csv(std::ostream& out, const BlowupReport& report);
/// vertex_x,vertex_y,mean_u in vertex order, coordinates shifted by the origin.
void write_field_csv(std::ostream& out, const BlowupReport& report, const BlowupSnapshot& snapshot);

/// Shortest round-trip decimal form used in every CSV.
std::string format_number(double value);

}  // namespace sks
