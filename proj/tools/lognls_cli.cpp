#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "lognls/lognls.h"

namespace {

struct Options {
  std::string out_dir;
  long long seed = 0;
  int threads = 1;
  bool has_seed = false;

  lognls_run_options c_options() const {
    return {out_dir.empty() ? nullptr : out_dir.c_str(), has_seed ? 1 : 0, seed};
  }
};

int report_error(lognls_status status) {
  const std::string key = lognls_last_error_key();
  std::fprintf(stderr, "lognls: error%s%s: %s\n", key.empty() ? "" : " in ", key.c_str(),
               lognls_last_error());
  return status;
}

int cmd_run(const std::string &path, const Options &opts) {
  lognls_config *config = nullptr;
  if (lognls_status s = lognls_config_load(path.c_str(), &config); s != LOGNLS_OK)
    return report_error(s);
  const lognls_run_options c = opts.c_options();
  lognls_run *run = nullptr;
  lognls_status status = lognls_run_config(config, &c, &run);
  lognls_config_free(config);
  if (!run) return report_error(status);

  std::printf("%s: %s (max discrepancy %.3g, %.2f s) -> %s\n", path.c_str(),
              lognls_run_passed(run) ? "pass" : "FAIL", lognls_run_max_discrepancy(run),
              lognls_run_duration(run), lognls_run_output_dir(run));
  if (status == LOGNLS_NUMERICAL_ABORT) std::fprintf(stderr, "lognls: numerical abort, see report.json\n");
  lognls_run_free(run);
  return status;
}

int cmd_suite(const std::string &dir, const Options &opts) {
  const lognls_run_options c = opts.c_options();
  const lognls_status status = lognls_run_suite(dir.c_str(), &c, opts.threads);
  if (status > LOGNLS_NUMERICAL_ABORT || *lognls_last_error()) return report_error(status);
  std::printf("suite %s: %s\n", dir.c_str(), status == LOGNLS_OK ? "all pass" : "failures");
  return status;
}

void print_criterion(int id, const char *title, int passed, const char *detail, double seconds,
                     void *) {
  std::printf("[%s] %d %s: %s (%.1f s)\n", passed ? "PASS" : "FAIL", id, title, detail, seconds);
  std::fflush(stdout);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Numerical lab for the logarithmic nonlinear Schrodinger equation"};
  app.set_version_flag("--version", std::string(lognls_version()));
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  Options opts;
  app.add_option("--out", opts.out_dir, "Output directory (default: $LOGNLS_OUT)");
  auto *seed = app.add_option("--seed", opts.seed, "Override the scenario seed");
  app.add_option("--threads", opts.threads, "Concurrent suite members")
      ->default_val(1)
      ->check(CLI::PositiveNumber);

  std::string config_path, suite_dir;
  auto *run = app.add_subcommand("run", "Run one scenario configuration");
  run->add_option("config", config_path, "Config file")->required();
  auto *suite = app.add_subcommand("suite", "Run every *.toml config in a directory");
  suite->add_option("dir", suite_dir, "Config directory")->required();
  auto *check = app.add_subcommand("check", "Run the built-in property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : LOGNLS_CONFIG_ERROR;
  }
  opts.has_seed = seed->count() > 0;

  if (*run) return cmd_run(config_path, opts);
  if (*suite) return cmd_suite(suite_dir, opts);
  if (*check) {
    const lognls_status s = lognls_check(0, print_criterion, nullptr);
    if (s > LOGNLS_NUMERICAL_ABORT) return report_error(s);
    std::printf("check: %s\n", s == LOGNLS_OK ? "all criteria pass" : "failures");
    return s;
  }
  return LOGNLS_CONFIG_ERROR;
}
