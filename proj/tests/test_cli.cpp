#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int cli(const std::string &args, const std::string &env = "") {
  const std::string cmd = env + " \"" LOGNLS_CLI "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string &name) {
  const fs::path d = fs::temp_directory_path() / ("lognls_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kConfigs = LOGNLS_CONFIG_DIR;

} // namespace

TEST_CASE("run exit codes", "[cli]") {
  const fs::path out = fresh_dir("run");
  CHECK(cli("run " + kConfigs + "/plane_wave.toml --out " + out.string()) == 0);
  CHECK(fs::exists(out / "report.json"));

  const fs::path cfg = fresh_dir("cfg");
  std::ofstream(cfg / "strict.toml") << "[grid]\npoints_per_axis = 16\n"
                                        "length_per_axis = 6.283185307179586\n"
                                        "[scenario]\nname = \"plane_wave\"\ntolerance = 0\n";
  CHECK(cli("run " + (cfg / "strict.toml").string() + " --out " + out.string()) == 1);

  std::ofstream(cfg / "bad.toml") << "[physics]\nkT = \"abc\"\n[scenario]\nname = \"plane_wave\"\n";
  CHECK(cli("run " + (cfg / "bad.toml").string() + " --out " + out.string()) == 2);
  CHECK(cli("run " + (cfg / "missing.toml").string()) == 2);

  std::ofstream(cfg / "nan.toml") << "[grid]\npoints_per_axis = 1024\n[physics]\nkT = -1.0\n"
                                     "[evolution]\nmode = \"imaginary\"\ndt = 10.0\nsteps = 50\n"
                                     "[scenario]\nname = \"relaxation\"\n";
  CHECK(cli("run " + (cfg / "nan.toml").string() + " --out " + out.string()) == 3);
}

TEST_CASE("output directory from the environment", "[cli]") {
  const fs::path out = fresh_dir("env");
  CHECK(cli("run " + kConfigs + "/scaling.toml", "LOGNLS_OUT=" + out.string()) == 0);
  CHECK(fs::exists(out / "series.csv"));
}

TEST_CASE("suite exit codes", "[cli]") {
  const fs::path out = fresh_dir("suite");
  CHECK(cli("suite " + kConfigs + " --out " + out.string() + " --threads 2") == 0);
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(cli("suite " + fresh_dir("empty").string() + " --out " + out.string()) == 2);
}

TEST_CASE("argument errors", "[cli]") {
  CHECK(cli("") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("run") == 2);
  CHECK(cli("--version") == 0);
  CHECK(cli("suite " + kConfigs + " --threads 0") == 2);
}
