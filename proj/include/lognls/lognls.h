#ifndef LOGNLS_LOGNLS_H
#define LOGNLS_LOGNLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(LOGNLS_BUILDING_LIBRARY)
#define LOGNLS_API __attribute__((visibility("default")))
#else
#define LOGNLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The first four double as process exit codes of the CLI. */
typedef enum lognls_status {
  LOGNLS_OK = 0,
  LOGNLS_SCENARIO_FAILED = 1,
  LOGNLS_CONFIG_ERROR = 2,
  LOGNLS_NUMERICAL_ABORT = 3,
  LOGNLS_INVALID_ARGUMENT = 4,
  LOGNLS_IO_ERROR = 5,
  LOGNLS_INTERNAL_ERROR = 6
} lognls_status;

typedef struct lognls_config lognls_config;
typedef struct lognls_run lognls_run;

LOGNLS_API const char *lognls_version(void);

/* Message and offending config key (may be "") of the last failed call on
 * the calling thread. */
LOGNLS_API const char *lognls_last_error(void);
LOGNLS_API const char *lognls_last_error_key(void);

LOGNLS_API lognls_status lognls_config_parse(const char *text, lognls_config **out);
LOGNLS_API lognls_status lognls_config_load(const char *path, lognls_config **out);
LOGNLS_API void lognls_config_free(lognls_config *config);
/* Fully resolved text form; owned by the handle. */
LOGNLS_API const char *lognls_config_echo(const lognls_config *config);

typedef struct lognls_run_options {
  const char *out_dir; /* NULL: config [output] directory, then $LOGNLS_OUT */
  int has_seed;
  int64_t seed;
} lognls_run_options;

/* Runs one configuration, writing report.json and series.csv. The returned
 * status is the run's exit code; *out receives a handle whenever the run
 * produced a record (it may be NULL on invalid arguments or I/O failure). */
LOGNLS_API lognls_status lognls_run_config(const lognls_config *config,
                                           const lognls_run_options *options, lognls_run **out);
LOGNLS_API void lognls_run_free(lognls_run *run);
LOGNLS_API lognls_status lognls_run_exit_code(const lognls_run *run);
LOGNLS_API int lognls_run_passed(const lognls_run *run);
LOGNLS_API double lognls_run_max_discrepancy(const lognls_run *run);
LOGNLS_API double lognls_run_duration(const lognls_run *run);
LOGNLS_API const char *lognls_run_report_json(const lognls_run *run);
LOGNLS_API const char *lognls_run_output_dir(const lognls_run *run);

/* Runs every *.toml in dir into <out>/<stem>/ and writes <out>/summary.csv. */
LOGNLS_API lognls_status lognls_run_suite(const char *dir, const lognls_run_options *options,
                                          int threads);

typedef void (*lognls_check_callback)(int id, const char *title, int passed, const char *detail,
                                      double seconds, void *user);

/* Built-in property suite (criteria 1..9). id == 0 runs all of them. */
LOGNLS_API lognls_status lognls_check(int id, lognls_check_callback callback, void *user);

#ifdef __cplusplus
}
#endif

#endif
