#pragma once

#include <filesystem>
#include <string>

#include "sks/experiments.hpp"

namespace sks {

/// Raised for unreadable or malformed configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON keys mirror the field names of ExperimentConfig and ModelParams:
///
///   test_id, nu, chi, delta, b: [bx, by], L, T,
///   levels: [{"N": 4, "k": 0.0625}, ...], final_times: [...],
///   J, base_seed, k0 (number or "1/2048"), initial_data, origin: [x, y],
///   output_dir, threads, spd_solver ("cg" | "cholesky"), tolerance
///
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the effective configuration (round-trips through
/// config_from_json).
std::string config_to_json(const ExperimentConfig& config);

/// Parses "0.00048828125", "1/2048" or "2^-11".
double parse_step(const std::string& text);

/// Built-in configurations of the four reference tests at the given sample count.
ExperimentConfig builtin_config(int test_id);

}  // namespace sks
