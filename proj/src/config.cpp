#include "sks/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sks {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "test_id", "nu",        "chi",          "delta",  "b",          "L",
      "T",       "levels",    "final_times",  "J",      "base_seed",  "k0",
      "initial_data", "origin", "output_dir", "threads", "spd_solver", "u_solver", "tolerance"};
  return keys;
}

Point point_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string("'") + key + "' must be a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

double step_from(const json& j, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_step(j.get<std::string>());
  throw ConfigError(std::string("'") + key + "' must be a number or a string like \"1/2048\"");
}

}  // namespace

double parse_step(const std::string& text) {
  try {
    std::size_t pos = 0;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash), &pos);
      const double den = std::stod(text.substr(slash + 1));
      if (!(den != 0.0)) throw ConfigError("zero denominator in '" + text + "'");
      return num / den;
    }
    if (const auto caret = text.find('^'); caret != std::string::npos) {
      return std::pow(std::stod(text.substr(0, caret)), std::stod(text.substr(caret + 1)));
    }
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw ConfigError("trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse step '" + text + "'");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known_keys().contains(item.key())) throw ConfigError("unknown configuration key '" + item.key() + "'");
  }

  ExperimentConfig c;
  try {
    if (doc.contains("test_id")) c = builtin_config(doc["test_id"].get<int>());
    if (doc.contains("nu")) c.params.nu = doc["nu"].get<double>();
    if (doc.contains("chi")) c.params.chi = doc["chi"].get<double>();
    if (doc.contains("delta")) c.params.delta = doc["delta"].get<double>();
    if (doc.contains("b")) c.params.b = point_from(doc["b"], "b");
    if (doc.contains("L")) c.params.L = doc["L"].get<double>();
    if (doc.contains("T")) c.T = step_from(doc["T"], "T");
    if (doc.contains("levels")) {
      c.levels.clear();
      for (const auto& l : doc["levels"]) {
        c.levels.push_back({l.at("N").get<Index>(), step_from(l.at("k"), "k")});
      }
    }
    if (doc.contains("final_times")) {
      c.final_times.clear();
      for (const auto& t : doc["final_times"]) c.final_times.push_back(step_from(t, "final_times"));
    }
    if (doc.contains("J")) c.samples = doc["J"].get<Index>();
    if (doc.contains("base_seed")) c.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("k0")) c.k0 = step_from(doc["k0"], "k0");
    if (doc.contains("initial_data")) c.initial_data = doc["initial_data"].get<std::string>();
    if (doc.contains("origin")) c.origin = point_from(doc["origin"], "origin");
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("threads")) c.threads = doc["threads"].get<unsigned>();
    if (doc.contains("spd_solver")) {
      const auto s = doc["spd_solver"].get<std::string>();
      if (s == "cg") {
        c.spd_method = SpdMethod::ConjugateGradient;
      } else if (s == "cholesky") {
        c.spd_method = SpdMethod::Cholesky;
      } else {
        throw ConfigError("spd_solver must be \"cg\" or \"cholesky\"");
      }
    }
    if (doc.contains("u_solver")) {
      const auto s = doc["u_solver"].get<std::string>();
      if (s == "lu") {
        c.u_method = GeneralMethod::SparseLU;
      } else if (s == "bicgstab") {
        c.u_method = GeneralMethod::BiCGSTAB;
      } else {
        throw ConfigError("u_solver must be \"lu\" or \"bicgstab\"");
      }
    }
    if (doc.contains("tolerance")) c.tolerance = doc["tolerance"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["test_id"] = c.test_id;
  doc["nu"] = c.params.nu;
  doc["chi"] = c.params.chi;
  doc["delta"] = c.params.delta;
  doc["b"] = {c.params.b.x(), c.params.b.y()};
  doc["L"] = c.params.L;
  doc["T"] = c.T;
  doc["levels"] = json::array();
  for (const Level& l : c.levels) doc["levels"].push_back({{"N", l.N}, {"k", l.k}});
  doc["final_times"] = c.final_times;
  doc["J"] = c.samples;
  doc["base_seed"] = c.base_seed;
  doc["k0"] = c.k0;
  doc["initial_data"] = c.initial_data;
  doc["origin"] = {c.origin.x(), c.origin.y()};
  doc["output_dir"] = c.output_dir;
  doc["threads"] = c.threads;
  doc["spd_solver"] = c.spd_method == SpdMethod::Cholesky ? "cholesky" : "cg";
  doc["u_solver"] = c.u_method == GeneralMethod::BiCGSTAB ? "bicgstab" : "lu";
  doc["tolerance"] = c.tolerance;
  return doc.dump(2) + "\n";
}

ExperimentConfig builtin_config(int test_id) {
  ExperimentConfig c;
  c.test_id = test_id;
  c.params = ModelParams{1.0, 1.0, 0.0, Point(1.0, 1.0), 1.0};
  c.T = 1.0;
  c.k0 = 1.0 / 2048.0;
  c.samples = 400;
  c.initial_data = "sin_pi";
  switch (test_id) {
    case 0:
      c.params.b = Point(1.0, 0.0);
      c.levels = {{4, 1.0 / 16.0}};
      break;
    case 1:
      c.params.delta = 1.0;
      c.levels = {{2, 1.0 / 4.0}, {4, 1.0 / 16.0}, {8, 1.0 / 64.0}, {16, 1.0 / 256.0}};
      break;
    case 2:
      c.params.delta = 10.0;
      c.levels = {{10, 1.0 / 128.0}, {10, 1.0 / 256.0}, {10, 1.0 / 512.0}, {10, 1.0 / 1024.0}};
      break;
    case 3:
      c.params.delta = 0.1;
      c.levels = {{4, 1.0 / 2048.0}, {8, 1.0 / 2048.0}, {16, 1.0 / 2048.0}, {32, 1.0 / 2048.0}};
      break;
    case 4:
      c.params.chi = 4.0 * std::numbers::pi;
      c.params.delta = 1.0;
      c.levels = {{60, 1e-6}};
      c.final_times = {3e-5, 5e-5, 9e-5, 2e-4};
      c.T = 2e-4;
      c.initial_data = "gaussian_blowup";
      c.origin = Point(-0.5, -0.5);
      break;
    default:
      throw ConfigError("unknown test id " + std::to_string(test_id) + " (expected 0-4)");
  }
  return c;
}

}  // namespace sks
