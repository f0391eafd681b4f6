#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lognls/scenarios.hpp"

namespace lognls {

// Fully resolved run configuration. The text form is a flat TOML subset:
//
//   [grid]        dims, points_per_axis, length_per_axis
//   [physics]     hbar, mass, kT, potential ("zero" | "harmonic" | "constant"),
//                 omega, v0
//   [evolution]   dt, steps, mode ("real" | "imaginary"), density_floor,
//                 record_every
//   [scenario]    name, seed, tolerance, plus the per-scenario keys below
//   [output]      directory
//
// Scenario keys: mode_index, mode_index_y, mode_index_z, amplitude (plane
// wave and plane-wave factors); center, sigma, momentum (packets, gausson);
// c_re, c_im (scaling); factor_x, factor_y (factorization); kt_values
// (spreading, quoted comma list); volumes, seeds, adversaries, max_iters,
// kkt_tolerance, step_size (energy bound sweep).
//
// Values are numbers, booleans or double-quoted strings; `#` starts a comment.
// Unknown sections or keys are rejected.
struct RunConfig {
  // [grid]
  int dims = 1;
  int points_per_axis = 256;
  double length_per_axis = 40.0;
  // [physics]
  double hbar = 1.0;
  double mass = 1.0;
  double kT = 0.0;
  std::string potential = "zero";
  double omega = 1.0;
  double v0 = 0.0;
  // [evolution]
  double dt = 1e-3;
  std::int64_t steps = 1000;
  std::string mode = "real";
  double density_floor = 1e-30;
  std::int64_t record_every = 10;
  // [scenario]
  std::string name;
  std::int64_t seed = 0;
  bool has_tolerance = false;
  double tolerance = 0.0;
  std::int64_t mode_index = 1;
  std::int64_t mode_index_y = 0;
  std::int64_t mode_index_z = 0;
  double amplitude = 1.0;
  double center = 0.0;
  double sigma = 1.0;
  double momentum = 0.0;
  double c_re = 2.0;
  double c_im = 0.0;
  std::string factor_x = "gaussian";
  std::string factor_y = "gaussian";
  std::vector<double> kt_values{0.5, 0.0, -0.5};
  std::vector<double> volumes{1.0, 2.718281828459045, 8.0, 100.0};
  std::int64_t seeds = 10;
  std::int64_t adversaries = 20;
  std::int64_t max_iters = 10000;
  double kkt_tolerance = 1e-8;
  double step_size = 0.5;
  // [output]
  std::string directory;

  bool operator==(const RunConfig &) const = default;
};

// Parses and validates; throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);

// Canonical text form with every key written out; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig &cfg);

// Builds the scenario spec. Throws ConfigError when a module precondition
// does not hold for the configured values.
ScenarioSpec to_scenario_spec(const RunConfig &cfg);

} // namespace lognls
