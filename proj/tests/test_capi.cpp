#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "lognls/lognls.h"

namespace fs = std::filesystem;

namespace {

const char *kPlaneWave = "[grid]\npoints_per_axis = 16\nlength_per_axis = 6.283185307179586\n"
                         "[evolution]\nsteps = 50\n[scenario]\nname = \"plane_wave\"\n";

fs::path fresh_dir(const std::string &name) {
  const fs::path d = fs::temp_directory_path() / ("lognls_test_capi_" + name);
  fs::remove_all(d);
  return d;
}

} // namespace

TEST_CASE("version string", "[capi]") {
  CHECK(std::string(lognls_version()).starts_with("lognls "));
}

TEST_CASE("config parse errors carry the key", "[capi]") {
  lognls_config *cfg = reinterpret_cast<lognls_config *>(0x1);
  CHECK(lognls_config_parse("[physics]\nkT = \"abc\"\n", &cfg) == LOGNLS_CONFIG_ERROR);
  CHECK(cfg == nullptr);
  CHECK(std::string(lognls_last_error_key()) == "physics.kT");
  CHECK(std::string(lognls_last_error()).find("type mismatch") != std::string::npos);

  CHECK(lognls_config_parse(nullptr, &cfg) == LOGNLS_INVALID_ARGUMENT);
  CHECK(lognls_config_load("/nonexistent.toml", &cfg) == LOGNLS_CONFIG_ERROR);
}

TEST_CASE("parse, echo and run", "[capi]") {
  lognls_config *cfg = nullptr;
  REQUIRE(lognls_config_parse(kPlaneWave, &cfg) == LOGNLS_OK);
  CHECK(std::string(lognls_config_echo(cfg)).find("name = \"plane_wave\"") != std::string::npos);

  const fs::path out = fresh_dir("run");
  const std::string dir = out.string();
  const lognls_run_options opts{dir.c_str(), 0, 0};
  lognls_run *run = nullptr;
  CHECK(lognls_run_config(cfg, &opts, &run) == LOGNLS_OK);
  REQUIRE(run != nullptr);
  CHECK(lognls_run_exit_code(run) == LOGNLS_OK);
  CHECK(lognls_run_passed(run) == 1);
  CHECK(lognls_run_max_discrepancy(run) < 1e-8);
  CHECK(lognls_run_duration(run) >= 0.0);
  CHECK(std::string(lognls_run_output_dir(run)) == dir);
  CHECK(std::string(lognls_run_report_json(run)).find("\"pass\": true") != std::string::npos);
  CHECK(fs::exists(out / "series.csv"));
  lognls_run_free(run);
  lognls_config_free(cfg);
}

TEST_CASE("null handles are tolerated", "[capi]") {
  lognls_config_free(nullptr);
  lognls_run_free(nullptr);
  CHECK(lognls_run_passed(nullptr) == 0);
  CHECK(lognls_run_exit_code(nullptr) == LOGNLS_INVALID_ARGUMENT);
  CHECK(std::strlen(lognls_run_report_json(nullptr)) == 0);
  lognls_run *run = nullptr;
  CHECK(lognls_run_config(nullptr, nullptr, &run) == LOGNLS_INVALID_ARGUMENT);
  CHECK(lognls_run_suite(nullptr, nullptr, 1) == LOGNLS_INVALID_ARGUMENT);
}

TEST_CASE("suite over the shipped configs", "[capi]") {
  const fs::path out = fresh_dir("suite");
  const std::string dir = out.string();
  const lognls_run_options opts{dir.c_str(), 0, 0};
  CHECK(lognls_run_suite(LOGNLS_CONFIG_DIR, &opts, 2) == LOGNLS_OK);
  CHECK(fs::exists(out / "summary.csv"));

  const fs::path empty = fresh_dir("empty");
  fs::create_directories(empty);
  CHECK(lognls_run_suite(empty.c_str(), &opts, 1) == LOGNLS_CONFIG_ERROR);
}

TEST_CASE("single built-in criterion through the callback", "[capi]") {
  std::vector<int> ids;
  auto cb = [](int id, const char *, int passed, const char *detail, double, void *user) {
    CHECK(passed == 1);
    CHECK(std::strlen(detail) > 0);
    static_cast<std::vector<int> *>(user)->push_back(id);
  };
  CHECK(lognls_check(4, cb, &ids) == LOGNLS_OK);
  CHECK(ids == std::vector<int>{4});
  CHECK(lognls_check(10, nullptr, nullptr) == LOGNLS_INVALID_ARGUMENT);
}
