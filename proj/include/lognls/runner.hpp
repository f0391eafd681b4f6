#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lognls/config.hpp"

namespace lognls {

// Process exit codes shared by the runner, the C API and the CLI.
enum class ExitCode : int { Pass = 0, ScenarioFailed = 1, ConfigError = 2, NumericalAbort = 3 };

struct RunOptions {
  // Highest priority output directory; falls back to the config's
  // [output] directory, then $LOGNLS_OUT, then "lognls_out".
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::int64_t> seed;
};

std::filesystem::path resolve_output_dir(const RunConfig &cfg, const RunOptions &opts);

struct RunRecord {
  ExitCode exit_code = ExitCode::Pass;
  std::string report_json; // contents written to report.json
  std::optional<ScenarioReport> report;
  double duration_seconds = 0.0;
  std::filesystem::path output_dir;
};

std::string version_string();

// Executes one configuration and writes report.json and series.csv into the
// resolved output directory.
RunRecord run(const RunConfig &cfg, const RunOptions &opts = {});

// CSV time series: t,norm_sq,E_total,E_kin,E_ext,E_log,var_x[,var_y,var_z].
std::string series_csv(const Trajectory &traj, int dims);

struct SuiteResult {
  ExitCode exit_code = ExitCode::Pass;
  std::filesystem::path summary_path;
};

// Runs every *.toml file in `dir` (sorted by name) into <out>/<stem>/ and
// writes <out>/summary.csv. With threads > 1 members run concurrently. The
// exit code is the worst member code; an empty or missing directory is a
// configuration error.
SuiteResult run_suite(const std::filesystem::path &dir, const RunOptions &opts, int threads = 1);

} // namespace lognls
