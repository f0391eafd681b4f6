#include "lognls/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace lognls {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Structured view of echo_config() text for the JSON record.
ordered_json config_object(const std::string &echo) {
  ordered_json out = ordered_json::object();
  std::istringstream in(echo);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      out[section] = ordered_json::object();
      continue;
    }
    const auto eq = line.find(" = ");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (value.front() == '"') {
      std::string s;
      for (std::size_t i = 1; i + 1 < value.size(); ++i) {
        if (value[i] == '\\') ++i;
        s += value[i];
      }
      out[section][key] = s;
    } else if (value == "true" || value == "false") {
      out[section][key] = value == "true";
    } else {
      out[section][key] = ordered_json::parse(value);
    }
  }
  return out;
}

ordered_json named(const std::vector<NamedValue> &values) {
  ordered_json o = ordered_json::object();
  for (const NamedValue &v : values) o[v.name] = v.value;
  return o;
}

ordered_json report_object(const ScenarioReport &r) {
  ordered_json checks = ordered_json::array();
  for (const Check &c : r.checks)
    checks.push_back({{"name", c.name},
                      {"discrepancy", c.discrepancy},
                      {"tolerance", c.tolerance},
                      {"adjustable", c.adjustable},
                      {"pass", c.passed()}});
  return {{"scenario", r.scenario},
          {"pass", r.pass},
          {"max_discrepancy", r.max_discrepancy()},
          {"predicted", named(r.predicted)},
          {"measured", named(r.measured)},
          {"checks", checks}};
}

void write_file(const fs::path &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::string series_header(int dims) {
  static const char *const kVar[] = {"var_x", "var_y", "var_z"};
  std::string out = "t,norm_sq,E_total,E_kin,E_ext,E_log";
  for (int a = 0; a < dims; ++a) out += std::string(",") + kVar[a];
  return out + '\n';
}

fs::path default_output_dir() {
  if (const char *env = std::getenv("LOGNLS_OUT"); env && *env) return env;
  return "lognls_out";
}

} // namespace

std::string version_string() { return std::string("lognls ") + LOGNLS_VERSION; }

fs::path resolve_output_dir(const RunConfig &cfg, const RunOptions &opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (!cfg.directory.empty()) return cfg.directory;
  return default_output_dir();
}

std::string series_csv(const Trajectory &traj, int dims) {
  std::string out = series_header(dims);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const EnergyBreakdown &e = traj.energy_series[i];
    out += fmt17(traj.times[i]) + ',' + fmt17(traj.norm_series[i]) + ',' + fmt17(e.total) + ',' +
           fmt17(e.kinetic) + ',' + fmt17(e.external) + ',' + fmt17(e.logarithmic);
    for (int a = 0; a < dims; ++a) out += ',' + fmt17(traj.variance_series[i][a]);
    out += '\n';
  }
  return out;
}

RunRecord run(const RunConfig &config, const RunOptions &opts) {
  RunConfig cfg = config;
  if (opts.seed) cfg.seed = *opts.seed;

  RunRecord rec;
  rec.output_dir = resolve_output_dir(cfg, opts);
  const std::string echo = echo_config(cfg);
  ordered_json doc = {{"tool", "lognls"},
                      {"version", version_string()},
                      {"config", config_object(echo)},
                      {"config_text", echo}};

  const auto start = std::chrono::steady_clock::now();
  ordered_json error = nullptr;
  try {
    const ScenarioSpec spec = to_scenario_spec(cfg);
    std::optional<double> tol;
    if (cfg.has_tolerance) tol = cfg.tolerance;
    rec.report = run_scenario(spec, tol);
    rec.exit_code = rec.report->pass ? ExitCode::Pass : ExitCode::ScenarioFailed;
  } catch (const NumericalAbort &e) {
    rec.exit_code = ExitCode::NumericalAbort;
    error = {{"kind", "numerical_abort"}, {"step", e.step_index()}, {"message", e.what()}};
  } catch (const ConfigError &e) {
    rec.exit_code = ExitCode::ConfigError;
    error = {{"kind", "config_error"}, {"key", e.key()}, {"message", e.what()}};
  } catch (const InvalidArgument &e) {
    rec.exit_code = ExitCode::ConfigError;
    error = {{"kind", "config_error"}, {"key", ""}, {"message", e.what()}};
  }
  rec.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  doc["report"] = rec.report ? report_object(*rec.report) : ordered_json(nullptr);
  doc["error"] = error;
  doc["exit_code"] = static_cast<int>(rec.exit_code);
  doc["duration_seconds"] = rec.duration_seconds;
  rec.report_json = doc.dump(2) + "\n";

  fs::create_directories(rec.output_dir);
  write_file(rec.output_dir / "report.json", rec.report_json);
  // Scenarios without time evolution (and aborted runs) get the header only.
  const std::string csv = rec.report && rec.report->trajectory
                              ? series_csv(*rec.report->trajectory, cfg.dims)
                              : series_header(cfg.dims);
  write_file(rec.output_dir / "series.csv", csv);
  return rec;
}

SuiteResult run_suite(const fs::path &dir, const RunOptions &opts, int threads) {
  SuiteResult result;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    for (const auto &entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".toml") files.push_back(entry.path());
  }
  if (files.empty()) {
    result.exit_code = ExitCode::ConfigError;
    return result;
  }
  std::sort(files.begin(), files.end());

  const fs::path out = opts.out_dir ? *opts.out_dir : default_output_dir();
  fs::create_directories(out);

  struct Row {
    std::string name;
    ExitCode code = ExitCode::Pass;
    double max_discrepancy = 0.0;
    double duration = 0.0;
  };
  std::vector<Row> rows(files.size());

  auto run_one = [&](std::size_t i) {
    Row &row = rows[i];
    row.name = files[i].stem().string();
    RunOptions member = opts;
    member.out_dir = out / row.name;
    try {
      std::ifstream in(files[i], std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      const RunRecord rec = run(parse_config(ss.str()), member);
      row.code = rec.exit_code;
      row.duration = rec.duration_seconds;
      if (rec.report) row.max_discrepancy = rec.report->max_discrepancy();
    } catch (const std::exception &e) {
      row.code = ExitCode::ConfigError;
      std::error_code ignored;
      fs::create_directories(*member.out_dir, ignored);
      std::ofstream(*member.out_dir / "error.txt") << e.what() << '\n';
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, files.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < files.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) run_one(i);
      });
  }

  std::string summary = "scenario,pass,max_discrepancy,duration\n";
  for (const Row &row : rows) {
    summary += row.name + ',' + (row.code == ExitCode::Pass ? "true" : "false") + ',' +
               fmt17(row.max_discrepancy) + ',' + fmt17(row.duration) + '\n';
    result.exit_code = std::max(result.exit_code, row.code);
  }
  result.summary_path = out / "summary.csv";
  write_file(result.summary_path, summary);
  return result;
}

} // namespace lognls
