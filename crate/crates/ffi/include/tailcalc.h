#ifndef TAILCALC_H
#define TAILCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcMode {
  TC_MODE_EXACT = 0,
  TC_MODE_FLOAT = 1,
} TcMode;

// Status codes; the nonzero error values match the command-line exit codes.
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_PARSE_ERROR = 1,
  TC_STATUS_PRECONDITION_VIOLATED = 2,
  TC_STATUS_HIGHER_ORDER_NEEDED = 3,
  TC_STATUS_INTERNAL_ERROR = 4,
  TC_STATUS_NULL_ARGUMENT = 5,
  TC_STATUS_OUT_OF_RANGE = 6,
  TC_STATUS_NOT_EVALUABLE = 7,
} TcStatus;

// A parsed problem document bound to a command.
typedef struct TcJob TcJob;

// The result of running a job.
typedef struct TcReport TcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tc_version(void);

// Message for the last failed call on this thread, or NULL.
//
// The pointer stays valid until the next `tc_` call on the same thread.
const char *tc_last_error_message(void);

// Parses `input_json` for `command` (e.g. `"expand"`, `"implicit-renewal"`).
//
// # Safety
// `command` and `input_json` must be NUL-terminated strings; `out` must be writable.
enum TcStatus tc_job_new(const char *command,
                         enum TcMode mode,
                         const char *input_json,
                         struct TcJob **out);

// Runs a job; the job stays owned by the caller.
//
// # Safety
// `job` must come from [`tc_job_new`] and not be freed; `out` must be writable.
enum TcStatus tc_job_run(const struct TcJob *job, struct TcReport **out);

// # Safety
// `job` must come from [`tc_job_new`] or be NULL; it must not be used afterwards.
void tc_job_free(struct TcJob *job);

// The report as JSON; free the string with [`tc_string_free`].
//
// # Safety
// `report` must come from [`tc_job_run`]; `out` must be writable.
enum TcStatus tc_report_json(const struct TcReport *report, bool pretty, char **out);

// Number of tail coefficients in the report (zero when the command produces none).
//
// # Safety
// `report` must come from [`tc_job_run`] or be NULL.
size_t tc_report_coefficient_count(const struct TcReport *report);

// Float value of tail coefficient `i`.
//
// # Safety
// `report` must come from [`tc_job_run`]; `value` must be writable.
enum TcStatus tc_report_coefficient(const struct TcReport *report, size_t i, double *value);

// Exact form of tail coefficient `i`; free with [`tc_string_free`].
//
// # Safety
// `report` must come from [`tc_job_run`]; `out` must be writable.
enum TcStatus tc_report_coefficient_exact(const struct TcReport *report, size_t i, char **out);

// # Safety
// `report` must come from [`tc_job_run`] or be NULL; it must not be used afterwards.
void tc_report_free(struct TcReport *report);

// # Safety
// `s` must be a string returned by this library, or NULL, and not freed before.
void tc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAILCALC_H */
