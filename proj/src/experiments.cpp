#include "sks/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SampleOutcome {
  bool excluded = true;
  bool coupling_exact = true;
  FieldErrors errors;
  std::string failure;
};

// One coarse run and its reference (2N, k/4) on the same path.
SampleOutcome paired_sample(const ExperimentConfig& config, const Level& level,
                            const InitialData& data, const WienerPath& path) {
  SampleOutcome out;
  const ModelParams& params = config.params;
  const PeriodicMesh coarse_mesh = build_uniform(level.N, params.L);
  const PeriodicMesh fine_mesh = refine(coarse_mesh);
  const Discretization coarse_disc{level.N, level.k, config.T};
  const Discretization fine_disc{2 * level.N, reference_step(level.k), config.T};

  // Coupling check: the increments the coarse run consumes must telescope
  // to W(T) exactly.
  const Index stride = path.steps_per(level.k);
  const Index steps = coarse_disc.steps();
  double telescoped = 0.0;
  for (Index m = 0; m < steps; ++m) telescoped += path.increment_steps(m * stride, (m + 1) * stride);
  out.coupling_exact = telescoped == path.increment_steps(0, steps * stride);

  try {
    Scheme coarse(coarse_mesh, params, scheme_options(config));
    TrajectoryRecord record;
    record.cells_per_side = level.N;
    SchemeState state = coarse.initialize(data);
    record.push(0.0, state.u, state.sigma, state.c);
    run(coarse, coarse_disc, path, std::move(state),
        [&record](Index, double t, const StepDiagnostics&, const SchemeState& s) {
          record.push(t, s.u, s.sigma, s.c);
        });

    Scheme fine(fine_mesh, params, scheme_options(config));
    PathErrorAccumulator acc(coarse_mesh, fine_mesh);
    run(fine, fine_disc, path, fine.initialize(data),
        [&](Index m, double, const StepDiagnostics&, const SchemeState& s) {
          if (m % 4 != 0) return;
          const auto i = static_cast<std::size_t>(m / 4);
          acc.add(record.u[i], record.sigma[i], record.c[i], s.u, s.sigma, s.c);
        });
    out.errors = acc.errors();
    out.excluded = false;
  } catch (const StepFailure& e) {
    out.excluded = true;
    out.failure = e.what();
  }
  return out;
}

ErrorReport paired_study(const ExperimentConfig& config, bool fit_rates) {
  config.validate();
  const auto start = Clock::now();
  const double resolution = path_resolution(config);
  const InitialData data = make_initial_data(config.initial_data, config.origin);
  const std::size_t levels = config.levels.size();
  const auto J = static_cast<std::size_t>(config.samples);

  std::vector<std::vector<SampleOutcome>> outcomes(levels, std::vector<SampleOutcome>(J));
  parallel_for(config.samples, config.threads, [&](Index j) {
    const WienerPath path = WienerPath::generate(sample_seed(config.base_seed, j), config.T, resolution);
    for (std::size_t l = 0; l < levels; ++l) {
      outcomes[l][static_cast<std::size_t>(j)] = paired_sample(config, config.levels[l], data, path);
    }
  });

  ErrorReport report;
  report.samples = config.samples;
  report.base_seed = config.base_seed;
  report.path_resolution = resolution;
  std::vector<double> eu, ec, es;
  for (std::size_t l = 0; l < levels; ++l) {
    LevelResult row;
    row.level = config.levels[l];
    row.h = row.level.h(config.params.L);
    eu.clear();
    ec.clear();
    es.clear();
    for (std::size_t j = 0; j < J; ++j) {
      const SampleOutcome& o = outcomes[l][j];
      if (!o.coupling_exact) ++report.coupling_violations;
      if (o.excluded) {
        if (row.excluded == 0) row.first_failure = o.failure;
        ++row.excluded;
        continue;
      }
      eu.push_back(o.errors.u);
      ec.push_back(o.errors.c);
      es.push_back(o.errors.sigma);
    }
    row.samples = static_cast<Index>(eu.size());
    if (eu.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.error = {nan, nan, nan};
    } else {
      row.error = {mc_aggregate(eu), mc_aggregate(ec), mc_aggregate(es)};
    }
    report.levels.push_back(row);
  }

  if (fit_rates && levels >= 2) {
    auto rate_of = [&](auto field, std::size_t first, std::size_t last) -> double {
      std::vector<double> hs, errs;
      for (std::size_t l = first; l < last; ++l) {
        hs.push_back(report.levels[l].h);
        errs.push_back(field(report.levels[l].error));
      }
      try {
        return estimate_rate(hs, errs);
      } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    const auto fu = [](const FieldErrors& e) { return e.u; };
    const auto fc = [](const FieldErrors& e) { return e.c; };
    const auto fs = [](const FieldErrors& e) { return e.sigma; };
    for (std::size_t l = 1; l < levels; ++l) {
      report.levels[l].local_rate = FieldErrors{rate_of(fu, l - 1, l + 1), rate_of(fc, l - 1, l + 1),
                                                rate_of(fs, l - 1, l + 1)};
    }
    report.fitted_rate = FieldErrors{rate_of(fu, 0, levels), rate_of(fc, 0, levels), rate_of(fs, 0, levels)};
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

}  // namespace

SchemeOptions scheme_options(const ExperimentConfig& config) {
  SchemeOptions options;
  options.tolerance = config.tolerance;
  options.spd_method = config.spd_method;
  options.u_method = config.u_method;
  return options;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("config: T must be positive");
  if (levels.empty()) throw std::invalid_argument("config: at least one level is required");
  for (const Level& l : levels) {
    if (l.N < 2) throw std::invalid_argument("config: level N must be >= 2");
    integer_ratio(T, l.k, "config: T / k");
  }
  if (samples < 1) throw std::invalid_argument("config: J must be >= 1");
  if (!(k0 > 0.0)) throw std::invalid_argument("config: k0 must be positive");
  for (double t : final_times) {
    if (!(t > 0.0)) throw std::invalid_argument("config: final times must be positive");
  }
  make_initial_data(initial_data, origin);
}

double path_resolution(const ExperimentConfig& config) {
  double finest = config.k0;
  for (const Level& l : config.levels) finest = std::min(finest, reference_step(l.k));
  for (const Level& l : config.levels) {
    integer_ratio(l.k, finest, "path resolution: coarse step");
    integer_ratio(reference_step(l.k), finest, "path resolution: reference step");
  }
  return finest;
}

Index ErrorReport::total_excluded() const {
  Index n = 0;
  for (const auto& l : levels) n += l.excluded;
  return n;
}

ErrorReport convergence_study(const ExperimentConfig& config) { return paired_study(config, true); }

ErrorReport inverse_k_study(const ExperimentConfig& config) {
  for (const Level& l : config.levels) {
    if (l.N != config.levels.front().N) {
      throw std::invalid_argument("inverse_k_study: every level must share the same N");
    }
  }
  return paired_study(config, false);
}

BlowupReport blowup_study(const ExperimentConfig& config) {
  config.validate();
  if (config.final_times.empty()) throw std::invalid_argument("blowup_study: no final times");
  const auto start = Clock::now();
  const Level& level = config.levels.front();
  const ModelParams& params = config.params;
  const PeriodicMesh mesh = build_uniform(level.N, params.L);
  const InitialData data = make_initial_data(config.initial_data, config.origin);

  std::vector<double> times = config.final_times;
  std::sort(times.begin(), times.end());
  const double horizon = times.back();
  std::vector<Index> capture;
  for (double t : times) capture.push_back(integer_ratio(t, level.k, "blowup_study: t_M / k"));
  const Discretization disc{level.N, level.k, horizon};
  const double resolution = std::min(config.k0, level.k);
  integer_ratio(level.k, resolution, "blowup_study: k / k0");

  struct SampleRun {
    bool excluded = true;
    std::vector<Vector> fields;
    std::vector<StepDiagnostics> diagnostics;
  };
  const auto J = static_cast<std::size_t>(config.samples);
  std::vector<SampleRun> runs(J);
  SchemeState initial;
  double initial_mass = 0.0;
  {
    Scheme scheme(mesh, params, scheme_options(config));
    initial = scheme.initialize(data);
    initial_mass = scheme.diagnose(initial).mass;
  }

  parallel_for(config.samples, config.threads, [&](Index j) {
    SampleRun& out = runs[static_cast<std::size_t>(j)];
    const WienerPath path = WienerPath::generate(sample_seed(config.base_seed, j), horizon, resolution);
    try {
      Scheme scheme(mesh, params, scheme_options(config));
      std::size_t next = 0;
      RunResult r = run(scheme, disc, path, initial,
                        [&](Index m, double, const StepDiagnostics&, const SchemeState& s) {
                          while (next < capture.size() && capture[next] == m) {
                            out.fields.push_back(s.u);
                            ++next;
                          }
                        });
      out.diagnostics = std::move(r.diagnostics);
      out.excluded = false;
    } catch (const StepFailure&) {
      out.fields.clear();
      out.excluded = true;
    }
  });

  BlowupReport report;
  report.cells_per_side = level.N;
  report.L = params.L;
  report.origin = config.origin;
  report.initial_mass = initial_mass;
  report.samples = config.samples;
  const FormMatrices forms = assemble_static(mesh, Point::Zero());
  std::vector<const SampleRun*> kept;
  for (const auto& r : runs) {
    if (r.excluded) {
      ++report.excluded;
    } else {
      kept.push_back(&r);
    }
  }

  for (std::size_t i = 0; i < times.size(); ++i) {
    BlowupSnapshot snap;
    snap.t = times[i];
    snap.samples = static_cast<Index>(kept.size());
    snap.mean_u = Vector::Zero(mesh.num_vertices());
    snap.min_u = std::numeric_limits<double>::infinity();
    snap.max_u = -std::numeric_limits<double>::infinity();
    for (const SampleRun* r : kept) {
      const Vector& u = r->fields[i];
      snap.mean_u += u;
      snap.min_u = std::min(snap.min_u, u.minCoeff());
      snap.max_u = std::max(snap.max_u, u.maxCoeff());
    }
    if (!kept.empty()) snap.mean_u /= static_cast<double>(kept.size());
    snap.mass = forms.mass_row_sums.dot(snap.mean_u);
    snap.linf_mean_field = snap.mean_u.cwiseAbs().maxCoeff();
    report.snapshots.push_back(std::move(snap));
  }

  const Index steps = disc.steps();
  for (Index m = 0; m < steps && !kept.empty(); ++m) {
    BlowupSeriesRow row;
    row.m = m + 1;
    row.t = static_cast<double>(m + 1) * level.k;
    row.min_u = std::numeric_limits<double>::infinity();
    row.max_u = -std::numeric_limits<double>::infinity();
    for (const SampleRun* r : kept) {
      const StepDiagnostics& d = r->diagnostics[static_cast<std::size_t>(m)];
      row.min_u = std::min(row.min_u, d.min_u);
      row.max_u = std::max(row.max_u, d.max_u);
      row.mean_mass += d.mass;
    }
    row.mean_mass /= static_cast<double>(kept.size());
    report.series.push_back(row);
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

double estimate_rate(std::span<const double> hs, std::span<const double> errors) {
  if (hs.size() != errors.size()) throw std::invalid_argument("estimate_rate: length mismatch");
  if (hs.size() < 2) throw std::invalid_argument("estimate_rate: need at least two points");
  const auto n = static_cast<double>(hs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(errors[i] > 0.0)) {
      throw std::invalid_argument("estimate_rate: entries must be positive");
    }
    sx += std::log(hs[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("estimate_rate: all h equal");
  return sxy / sxx;
}

void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<Index>(workers, count));
  if (workers <= 1) {
    for (Index j = 0; j < count; ++j) fn(j);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index j = next.fetch_add(1); j < count; j = next.fetch_add(1)) {
        try {
          fn(j);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string optional_number(const std::optional<FieldErrors>& r, double FieldErrors::*field) {
  return r ? format_number((*r).*field) : std::string();
}

}  // namespace

void write_convergence_csv(std::ostream& out, const ErrorReport& report) {
  out << "level,h,k,J,err_u,err_c,err_sigma,rate_u,rate_c,rate_sigma,excluded\n";
  for (std::size_t l = 0; l < report.levels.size(); ++l) {
    const LevelResult& r = report.levels[l];
    out << l << ',' << format_number(r.h) << ',' << format_number(r.level.k) << ',' << report.samples
        << ',' << format_number(r.error.u) << ',' << format_number(r.error.c) << ','
        << format_number(r.error.sigma) << ',' << optional_number(r.local_rate, &FieldErrors::u) << ','
        << optional_number(r.local_rate, &FieldErrors::c) << ','
        << optional_number(r.local_rate, &FieldErrors::sigma) << ',' << r.excluded << '\n';
  }
}

void write_inverse_k_csv(std::ostream& out, const ErrorReport& report) {
  out << "h,k,J,err_u,err_c,err_sigma,excluded\n";
  for (const LevelResult& r : report.levels) {
    out << format_number(r.h) << ',' << format_number(r.level.k) << ',' << report.samples << ','
        << format_number(r.error.u) << ',' << format_number(r.error.c) << ','
        << format_number(r.error.sigma) << ',' << r.excluded << '\n';
  }
}

void write_blowup_csv(std::ostream& out, const BlowupReport& report) {
  out << "tM,J,min_u,max_u,mass,linf_mean_field\n";
  for (const BlowupSnapshot& s : report.snapshots) {
    out << format_number(s.t) << ',' << s.samples << ',' << format_number(s.min_u) << ','
        << format_number(s.max_u) << ',' << format_number(s.mass) << ','
        << format_number(s.linf_mean_field) << '\n';
  }
}

void write_blowup_series_csv(std::ostream& out, const BlowupReport& report) {
  out << "m,t,min_u,max_u,mass\n";
  for (const BlowupSeriesRow& r : report.series) {
    out << r.m << ',' << format_number(r.t) << ',' << format_number(r.min_u) << ','
        << format_number(r.max_u) << ',' << format_number(r.mean_mass) << '\n';
  }
}

void write_field_csv(std::ostream& out, const BlowupReport& report, const BlowupSnapshot& snapshot) {
  const PeriodicMesh mesh = build_uniform(report.cells_per_side, report.L);
  out << "vertex_x,vertex_y,mean_u\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Point x = mesh.vertex(v) + report.origin;
    out << format_number(x.x()) << ',' << format_number(x.y()) << ',' << format_number(snapshot.mean_u[v])
        << '\n';
  }
}

}  // namespace sks
