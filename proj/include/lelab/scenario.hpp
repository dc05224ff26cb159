#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace lelab {

struct ProfileSpec {
  /// "power": amp |x|^{-α};  "bubble": amp (1 - (r/R)^2);  "csv": read from path
  std::string kind = "power";
  double amp = 1.0;
  std::string path;
};

struct ControlSpec {
  std::string scheme = "implicit_euler";
  double dt_max = 1e-3;
  double dt_min = 1e-14;
  double safety = 0.1;
  double u_max = 1e8;
  double horizon = 10.0; ///< flow horizon (simulate, minimal, scan-m)
  double T = 0.1;        ///< Picard window (picard, scan-eps)
  int steps = 1000;      ///< Picard time steps on [0, T]
  int max_iter = 50;
  double tol = 1e-8;
  std::vector<double> amps{0.01, 0.02, 0.05};
  double c_lo = 0.05;
  double c_hi = 5.0;
  int bisection = 12;
  std::vector<double> t_grid; ///< decay sample times; empty = 13 log-spaced in [1e-4, 1e-1]
  std::vector<double> scales{0.5, 0.25};
  double t_check = 0.1;
  std::vector<int> levels{16, 64, 256};
  double t_small = 0.01;
  std::vector<double> c_grid{0.05, 0.5, 1.0, 2.0, 5.0};
  int samples = 10000;
  int centers = 16;
};

struct ExperimentConfig {
  std::string name = "constants";
  double p = 4.0;
  int n = 5;
  double R = 1.0;
  int M = 1000;
  double grading = 2.0;
  ProfileSpec profile;
  ControlSpec controls;
  std::uint64_t seed = 1;
};

void to_json(nlohmann::json &j, const ExperimentConfig &c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json &j, ExperimentConfig &c);

/// Defaults for a named scenario: the base defaults with the profile and
/// controls the scenario is meant to be run with.
ExperimentConfig default_config(const std::string &name);

/// Names of the runnable scenarios, in catalog order.
const std::vector<std::string> &scenario_names();

/// The catalog printed by `list`: one line per scenario with a description
/// and the mathematical statement it exercises.
std::string list_scenarios();

/// Runs config.name, writing config.json, CSV/JSON outputs and manifest.json
/// into out_dir. Returns 0 on success and 2 after writing error.json on any
/// failure. Progress lines go to log.
int run_scenario(const ExperimentConfig &config, const std::filesystem::path &out_dir, std::ostream &log);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path &path);

} // namespace lelab
