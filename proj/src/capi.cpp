#include "lognls/lognls.h"

#include <fstream>
#include <sstream>
#include <string>

#include "lognls/acceptance.hpp"
#include "lognls/runner.hpp"

struct lognls_config {
  lognls::RunConfig config;
  std::string echo;
};

struct lognls_run {
  lognls::RunRecord record;
  std::string output_dir;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_key;

lognls_status fail(lognls_status status, std::string message, std::string key = {}) {
  g_error = std::move(message);
  g_error_key = std::move(key);
  return status;
}

void clear_error() {
  g_error.clear();
  g_error_key.clear();
}

// Every entry point funnels exceptions through here so nothing escapes the C
// boundary.
template <class F> lognls_status guarded(F &&body) {
  try {
    clear_error();
    return body();
  } catch (const lognls::ConfigError &e) {
    return fail(LOGNLS_CONFIG_ERROR, e.what(), e.key());
  } catch (const lognls::NumericalAbort &e) {
    return fail(LOGNLS_NUMERICAL_ABORT, e.what());
  } catch (const lognls::InvalidArgument &e) {
    return fail(LOGNLS_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error &e) {
    return fail(LOGNLS_IO_ERROR, e.what());
  } catch (const std::exception &e) {
    return fail(LOGNLS_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(LOGNLS_INTERNAL_ERROR, "unknown error");
  }
}

lognls::RunOptions to_options(const lognls_run_options *o) {
  lognls::RunOptions opts;
  if (!o) return opts;
  if (o->out_dir && *o->out_dir) opts.out_dir = o->out_dir;
  if (o->has_seed) opts.seed = o->seed;
  return opts;
}

} // namespace

extern "C" {

const char *lognls_version(void) {
  static const std::string v = lognls::version_string();
  return v.c_str();
}

const char *lognls_last_error(void) { return g_error.c_str(); }
const char *lognls_last_error_key(void) { return g_error_key.c_str(); }

lognls_status lognls_config_parse(const char *text, lognls_config **out) {
  if (!text || !out) return fail(LOGNLS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<lognls_config>();
    handle->config = lognls::parse_config(text);
    handle->echo = lognls::echo_config(handle->config);
    *out = handle.release();
    return LOGNLS_OK;
  });
}

lognls_status lognls_config_load(const char *path, lognls_config **out) {
  if (!path || !out) return fail(LOGNLS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(LOGNLS_CONFIG_ERROR, std::string("cannot read config file ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return lognls_config_parse(ss.str().c_str(), out);
}

void lognls_config_free(lognls_config *config) { delete config; }

const char *lognls_config_echo(const lognls_config *config) {
  return config ? config->echo.c_str() : "";
}

lognls_status lognls_run_config(const lognls_config *config, const lognls_run_options *options,
                                lognls_run **out) {
  if (!config || !out) return fail(LOGNLS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<lognls_run>();
    handle->record = lognls::run(config->config, to_options(options));
    handle->output_dir = handle->record.output_dir.string();
    const auto status = static_cast<lognls_status>(handle->record.exit_code);
    *out = handle.release();
    return status;
  });
}

void lognls_run_free(lognls_run *run) { delete run; }

lognls_status lognls_run_exit_code(const lognls_run *run) {
  return run ? static_cast<lognls_status>(run->record.exit_code) : LOGNLS_INVALID_ARGUMENT;
}

int lognls_run_passed(const lognls_run *run) {
  return run && run->record.report && run->record.report->pass ? 1 : 0;
}

double lognls_run_max_discrepancy(const lognls_run *run) {
  return run && run->record.report ? run->record.report->max_discrepancy() : 0.0;
}

double lognls_run_duration(const lognls_run *run) { return run ? run->record.duration_seconds : 0.0; }

const char *lognls_run_report_json(const lognls_run *run) {
  return run ? run->record.report_json.c_str() : "";
}

const char *lognls_run_output_dir(const lognls_run *run) { return run ? run->output_dir.c_str() : ""; }

lognls_status lognls_run_suite(const char *dir, const lognls_run_options *options, int threads) {
  if (!dir) return fail(LOGNLS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const lognls::SuiteResult r = lognls::run_suite(dir, to_options(options), threads);
    if (r.summary_path.empty())
      return fail(LOGNLS_CONFIG_ERROR, std::string("no *.toml configs in ") + dir);
    return static_cast<lognls_status>(r.exit_code);
  });
}

lognls_status lognls_check(int id, lognls_check_callback callback, void *user) {
  if (id < 0 || id > lognls::kBuiltinCriteria)
    return fail(LOGNLS_INVALID_ARGUMENT, "criterion id out of range");
  return guarded([&] {
    bool all = true;
    auto report = [&](const lognls::CriterionResult &r) {
      all = all && r.pass;
      if (callback) callback(r.id, r.title.c_str(), r.pass ? 1 : 0, r.detail.c_str(), r.seconds, user);
    };
    if (id == 0)
      lognls::run_builtin_suite(report);
    else
      report(lognls::check_criterion(id));
    return all ? LOGNLS_OK : LOGNLS_SCENARIO_FAILED;
  });
}

} // extern "C"
