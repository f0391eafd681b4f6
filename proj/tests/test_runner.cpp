#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lognls/runner.hpp"

using namespace lognls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string &name) {
  const fs::path d = fs::temp_directory_path() / ("lognls_test_runner_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char *kPlaneWave = R"([grid]
points_per_axis = 16
length_per_axis = 6.283185307179586
[physics]
kT = 0.5
[evolution]
steps = 200
record_every = 20
[scenario]
name = "plane_wave"
)";

const char *kScaling2D = R"([grid]
dims = 2
points_per_axis = 32
length_per_axis = 12.0
[physics]
kT = 0.3
[evolution]
dt = 1e-2
steps = 20
record_every = 5
[scenario]
name = "scaling"
momentum = 0.5
)";

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("run writes report.json and series.csv", "[runner]") {
  const fs::path out = fresh_dir("run");
  const RunRecord rec = run(parse_config(kPlaneWave), RunOptions{.out_dir = out});
  CHECK(rec.exit_code == ExitCode::Pass);

  const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(doc["report"]["pass"] == true);
  CHECK(doc["report"]["scenario"] == "plane_wave");
  CHECK(doc["exit_code"] == 0);
  CHECK(doc["version"] == version_string());
  CHECK(doc["config"]["physics"]["kT"] == 0.5);
  CHECK(doc["error"].is_null());
  // The echoed configuration reparses to the same run.
  CHECK(parse_config(doc["config_text"].get<std::string>()) == parse_config(kPlaneWave));

  const auto rows = lines(slurp(out / "series.csv"));
  REQUIRE(rows.size() == 1 + 11);
  CHECK(rows[0] == "t,norm_sq,E_total,E_kin,E_ext,E_log,var_x");
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::count(rows[i].begin(), rows[i].end(), ',') == 6);
}

TEST_CASE("CSV columns follow the dimension and carry full precision", "[runner]") {
  const fs::path out = fresh_dir("csv2d");
  run(parse_config(kScaling2D), RunOptions{.out_dir = out});
  const auto rows = lines(slurp(out / "series.csv"));
  CHECK(rows[0] == "t,norm_sq,E_total,E_kin,E_ext,E_log,var_x,var_y");
  // E_total on the second row: at least 15 significant digits.
  std::vector<std::string> cells;
  std::istringstream row(rows[2]);
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 8);
  std::size_t digits = 0;
  for (char ch : cells[2].substr(0, cells[2].find_first_of("eE"))) digits += std::isdigit(ch) ? 1 : 0;
  CHECK(digits >= 15);
}

TEST_CASE("single-threaded reruns are byte-identical", "[runner]") {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  run(parse_config(kScaling2D), RunOptions{.out_dir = a});
  run(parse_config(kScaling2D), RunOptions{.out_dir = b});
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
}

TEST_CASE("zero tolerance fails the run", "[runner]") {
  std::string text = kPlaneWave;
  text += "tolerance = 0\n";
  const RunRecord rec = run(parse_config(text), RunOptions{.out_dir = fresh_dir("tol0")});
  CHECK(rec.exit_code == ExitCode::ScenarioFailed);
  CHECK_FALSE(rec.report->pass);
}

TEST_CASE("numerical abort records the step", "[runner]") {
  const fs::path out = fresh_dir("nan");
  const RunRecord rec = run(parse_config(R"([grid]
points_per_axis = 1024
[physics]
kT = -1.0
[evolution]
mode = "imaginary"
dt = 10.0
steps = 50
[scenario]
name = "relaxation"
)"),
                            RunOptions{.out_dir = out});
  CHECK(rec.exit_code == ExitCode::NumericalAbort);
  const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(doc["error"]["kind"] == "numerical_abort");
  CHECK(doc["error"]["step"].get<int>() >= 1);
  CHECK(doc["exit_code"] == 3);
  CHECK(lines(slurp(out / "series.csv")).size() == 1);
}

TEST_CASE("output directory precedence", "[runner]") {
  RunConfig cfg = parse_config(kPlaneWave);
  ::setenv("LOGNLS_OUT", "/tmp/from_env", 1);
  CHECK(resolve_output_dir(cfg, {}) == "/tmp/from_env");
  cfg.directory = "/tmp/from_config";
  CHECK(resolve_output_dir(cfg, {}) == "/tmp/from_config");
  CHECK(resolve_output_dir(cfg, RunOptions{.out_dir = "/tmp/from_flag"}) == "/tmp/from_flag");
  ::unsetenv("LOGNLS_OUT");
  CHECK(resolve_output_dir(parse_config(kPlaneWave), {}) == "lognls_out");
}

TEST_CASE("seed override is echoed", "[runner]") {
  const fs::path out = fresh_dir("seed");
  run(parse_config(kPlaneWave), RunOptions{.out_dir = out, .seed = 1234});
  const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(doc["config"]["scenario"]["seed"] == 1234);
}

TEST_CASE("suite summary marks the failing member", "[runner]") {
  const fs::path in = fresh_dir("suite_in"), out = fresh_dir("suite_out");
  std::ofstream(in / "a_ok.toml") << kPlaneWave;
  std::ofstream(in / "b_bad.toml") << std::string(kPlaneWave) + "tolerance = 0\n";
  std::ofstream(in / "c_ok.toml") << kScaling2D;
  std::ofstream(in / "notes.txt") << "ignored";

  for (int threads : {1, 3}) {
    const SuiteResult r = run_suite(in, RunOptions{.out_dir = out}, threads);
    CHECK(r.exit_code == ExitCode::ScenarioFailed);
    const auto rows = lines(slurp(r.summary_path));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "scenario,pass,max_discrepancy,duration");
    CHECK(rows[1].starts_with("a_ok,true,"));
    CHECK(rows[2].starts_with("b_bad,false,"));
    CHECK(rows[3].starts_with("c_ok,true,"));
    CHECK(fs::exists(out / "b_bad" / "report.json"));
  }
}

TEST_CASE("suite exit codes", "[runner]") {
  CHECK(run_suite(fresh_dir("empty"), RunOptions{.out_dir = fresh_dir("empty_out")}).exit_code ==
        ExitCode::ConfigError);
  CHECK(run_suite("/nonexistent/lognls", {}).exit_code == ExitCode::ConfigError);

  const fs::path in = fresh_dir("suite_cfg");
  std::ofstream(in / "ok.toml") << kPlaneWave;
  std::ofstream(in / "broken.toml") << "[grid]\npoints_per_axis = 7\n";
  const fs::path out = fresh_dir("suite_cfg_out");
  CHECK(run_suite(in, RunOptions{.out_dir = out}).exit_code == ExitCode::ConfigError);
  CHECK(fs::exists(out / "broken" / "error.txt"));

  const fs::path good = fresh_dir("suite_good");
  std::ofstream(good / "ok.toml") << kPlaneWave;
  CHECK(run_suite(good, RunOptions{.out_dir = fresh_dir("suite_good_out")}).exit_code == ExitCode::Pass);
}
