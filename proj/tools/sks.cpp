// Command-line driver for the stochastic Keller-Segel simulations.
//
//   sks run         --config cfg.json --out out/
//   sks convergence --config test1.json --samples 50 --seed 7 --out out/
//   sks inverse-k   --test 2 --samples 50 --out out/
//   sks blowup      --test 4 --samples 10 --out out/
//   sks selftest
//
// Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sks/config.hpp"
#include "sks/experiments.hpp"
#include "sks/verify/selftest.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config_path;
  std::optional<int> test_id;
  std::optional<sks::Index> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> k0;
  int verbosity = 1;
};

void add_common(CLI::App* cmd, Options& o, bool with_samples) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration");
  cmd->add_option("--test", o.test_id, "Start from the built-in configuration of test 0-4")->check(CLI::Range(0, 4));
  if (with_samples) cmd->add_option("--samples", o.samples, "Monte Carlo sample count J")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base seed (falls back to $SKS_SEED)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads across samples (default: all cores)");
  cmd->add_option("--k0", o.k0, "Wiener path resolution, e.g. 1/2048");
  cmd->add_flag_function("-v,--verbose", [&o](std::int64_t n) { o.verbosity = 1 + static_cast<int>(n); },
                         "More progress output");
  cmd->add_flag_function("-q,--quiet", [&o](std::int64_t) { o.verbosity = 0; }, "No progress output");
}

sks::ExperimentConfig effective_config(const Options& o) {
  sks::ExperimentConfig c;
  if (!o.config_path.empty()) {
    if (!fs::exists(o.config_path)) throw sks::ConfigError("config file not found: " + o.config_path);
    c = sks::load_config(o.config_path);
  } else if (o.test_id) {
    c = sks::builtin_config(*o.test_id);
  } else {
    throw sks::ConfigError("either --config PATH or --test ID is required");
  }
  if (o.test_id && !o.config_path.empty()) {
    throw sks::ConfigError("--config and --test are mutually exclusive");
  }
  if (o.samples) c.samples = *o.samples;
  if (o.seed) {
    c.base_seed = *o.seed;
  } else if (const char* env = std::getenv("SKS_SEED"); env != nullptr && *env != '\0') {
    try {
      c.base_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw sks::ConfigError(std::string("SKS_SEED is not an unsigned integer: ") + env);
    }
  }
  if (o.out) c.output_dir = *o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.k0) c.k0 = sks::parse_step(*o.k0);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw sks::ConfigError(e.what());
  }
  return c;
}

fs::path prepare_output(const sks::ExperimentConfig& c) {
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw sks::ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream(dir / "effective_config.json") << sks::config_to_json(c);
  return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sks::ConfigError("cannot write " + path.string());
  writer(out);
}

void print_report(const sks::ErrorReport& r, int verbosity) {
  if (verbosity == 0) return;
  for (const auto& l : r.levels) {
    std::cerr << "  N=" << l.level.N << " k=" << l.level.k << "  err_u=" << l.error.u << " err_c=" << l.error.c
              << " err_sigma=" << l.error.sigma << " excluded=" << l.excluded << "\n";
    if (!l.first_failure.empty()) std::cerr << "    first failure: " << l.first_failure << "\n";
  }
  if (r.fitted_rate) {
    std::cerr << "  fitted rates: u=" << r.fitted_rate->u << " c=" << r.fitted_rate->c
              << " sigma=" << r.fitted_rate->sigma << "\n";
  }
  std::cerr << "  wall " << r.wall_seconds << " s\n";
}

bool any_level_empty(const sks::ErrorReport& r) {
  for (const auto& l : r.levels) {
    if (l.samples == 0) return true;
  }
  return false;
}

int cmd_study(const Options& o, bool inverse_k) {
  const sks::ExperimentConfig c = effective_config(o);
  const fs::path dir = prepare_output(c);
  if (o.verbosity > 0) {
    std::cerr << (inverse_k ? "inverse-k" : "convergence") << " study, J=" << c.samples << ", seed=" << c.base_seed
              << "\n";
  }
  const sks::ErrorReport report = inverse_k ? sks::inverse_k_study(c) : sks::convergence_study(c);
  if (inverse_k) {
    write_file(dir / "inverse_k.csv", [&](std::ostream& out) { sks::write_inverse_k_csv(out, report); });
  } else {
    write_file(dir / "convergence.csv", [&](std::ostream& out) { sks::write_convergence_csv(out, report); });
  }
  print_report(report, o.verbosity);
  if (report.coupling_violations > 0) {
    std::cerr << "error: " << report.coupling_violations << " samples broke Wiener path coupling\n";
    return kExitNumerical;
  }
  if (report.total_excluded() > 0 && o.verbosity > 0) {
    std::cerr << "warning: " << report.total_excluded() << " sample runs excluded after solver failures\n";
  }
  return any_level_empty(report) ? kExitNumerical : kExitOk;
}

int cmd_blowup(const Options& o) {
  const sks::ExperimentConfig c = effective_config(o);
  const fs::path dir = prepare_output(c);
  const sks::BlowupReport report = sks::blowup_study(c);
  write_file(dir / "blowup.csv", [&](std::ostream& out) { sks::write_blowup_csv(out, report); });
  write_file(dir / "blowup_series.csv", [&](std::ostream& out) { sks::write_blowup_series_csv(out, report); });
  for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
    const auto& s = report.snapshots[i];
    write_file(dir / ("field_tM_" + sks::format_number(s.t) + ".csv"),
               [&](std::ostream& out) { sks::write_field_csv(out, report, s); });
  }
  if (o.verbosity > 0) {
    for (const auto& s : report.snapshots) {
      std::cerr << "  tM=" << s.t << " max E[u]=" << s.linf_mean_field << " min_u=" << s.min_u
                << " mass=" << s.mass << "\n";
    }
    std::cerr << "  initial mass " << report.initial_mass << ", excluded " << report.excluded << ", wall "
              << report.wall_seconds << " s\n";
  }
  return report.excluded == report.samples ? kExitNumerical : kExitOk;
}

int cmd_run(const Options& o) {
  const sks::ExperimentConfig c = effective_config(o);
  const fs::path dir = prepare_output(c);
  const sks::Level& level = c.levels.front();
  const sks::PeriodicMesh mesh = sks::build_uniform(level.N, c.params.L);
  sks::Scheme scheme(mesh, c.params, sks::scheme_options(c));
  const double resolution = std::min(c.k0, level.k);
  const sks::WienerPath path = sks::WienerPath::generate(c.base_seed, c.T, resolution);

  std::ofstream diag_out(dir / "run_diagnostics.csv", std::ios::binary);
  diag_out << "m,t,mass,min_u,max_u,l2_u\n";
  auto emit = [&](sks::Index m, double t, const sks::StepDiagnostics& d) {
    diag_out << m << ',' << sks::format_number(t) << ',' << sks::format_number(d.mass) << ','
             << sks::format_number(d.min_u) << ',' << sks::format_number(d.max_u) << ','
             << sks::format_number(d.l2_u) << '\n';
  };
  sks::SchemeState initial = scheme.initialize(sks::make_initial_data(c.initial_data, c.origin));
  emit(0, 0.0, scheme.diagnose(initial));
  sks::RunResult result;
  try {
    result = sks::run(scheme, {level.N, level.k, c.T}, path, std::move(initial),
                      [&](sks::Index m, double t, const sks::StepDiagnostics& d, const sks::SchemeState&) {
                        emit(m, t, d);
                        if (o.verbosity > 1) std::cerr << "  step " << m << " t=" << t << " max_u=" << d.max_u << "\n";
                      });
  } catch (const sks::StepFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  write_file(dir / "final_fields.csv", [&](std::ostream& out) {
    out << "vertex_x,vertex_y,u,c,sigma_x,sigma_y\n";
    const auto& s = result.final_state;
    for (sks::Index v = 0; v < mesh.num_vertices(); ++v) {
      const sks::Point x = mesh.vertex(v) + c.origin;
      out << sks::format_number(x.x()) << ',' << sks::format_number(x.y()) << ',' << sks::format_number(s.u[v])
          << ',' << sks::format_number(s.c[v]) << ',' << sks::format_number(s.sigma[2 * v]) << ','
          << sks::format_number(s.sigma[2 * v + 1]) << '\n';
    }
  });
  if (o.verbosity > 0) {
    std::cerr << "run finished: " << result.diagnostics.size() << " steps\n";
  }
  return kExitOk;
}

int cmd_selftest(const Options& o) {
  bool ok = true;
  for (const auto& r : sks::verify::run_selftest()) {
    ok = ok && r.passed;
    if (o.verbosity > 0) std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Keller-Segel chemotaxis: Crank-Nicolson mixed FEM simulations"};
  app.require_subcommand(1);
  Options opts;
  auto* run = app.add_subcommand("run", "Single realization with diagnostics");
  auto* conv = app.add_subcommand("convergence", "Paired strong-error convergence study");
  auto* invk = app.add_subcommand("inverse-k", "Error growth under time-step refinement at fixed h");
  auto* blow = app.add_subcommand("blowup", "Mean-field blow-up study");
  auto* self = app.add_subcommand("selftest", "Oracle, conservation and heat-reduction checks");
  add_common(run, opts, false);
  add_common(conv, opts, true);
  add_common(invk, opts, true);
  add_common(blow, opts, true);
  self->add_flag_function("-q,--quiet", [&opts](std::int64_t) { opts.verbosity = 0; }, "No output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(opts);
    if (*conv) return cmd_study(opts, false);
    if (*invk) return cmd_study(opts, true);
    if (*blow) return cmd_blowup(opts);
    if (*self) return cmd_selftest(opts);
  } catch (const sks::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sks::StepFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sks::SolveError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
