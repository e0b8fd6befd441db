#ifndef SPIRAL_SPIRAL_H
#define SPIRAL_SPIRAL_H

/* C interface to the spiral library. Every function returns a status code;
 * on failure spiral_last_error() describes the most recent error on the
 * calling thread. Strings handed out by the library are released with
 * spiral_string_free. */

#include <stdint.h>

#if defined(_WIN32)
#define SPIRAL_API __declspec(dllexport)
#else
#define SPIRAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spiral_status {
  SPIRAL_OK = 0,
  SPIRAL_INVALID_ARGUMENT = 1,
  SPIRAL_CONFIG = 2,
  SPIRAL_BUDGET_EXCEEDED = 3,
  SPIRAL_ACCEPTANCE_FAILURE = 4,
  SPIRAL_ZERO_VECTOR = 5,
  SPIRAL_DEGENERATE_RATIONAL = 6,
  SPIRAL_UNBOUNDED_REGION = 7,
  SPIRAL_DIVISION_BY_ZERO = 8,
  SPIRAL_EMPTY_DENOMINATOR = 9,
  SPIRAL_ITERATION_CAP = 10,
  SPIRAL_INTERNAL = 11
} spiral_status;

typedef struct spiral_config spiral_config;
typedef struct spiral_report spiral_report;

SPIRAL_API const char* spiral_version(void);
SPIRAL_API const char* spiral_status_name(spiral_status status);
/* Message of the last failed call on this thread, or "" if none. */
SPIRAL_API const char* spiral_last_error(void);
SPIRAL_API void spiral_string_free(char* s);

/* Overrides the process-wide enumeration budget; must be positive. */
SPIRAL_API spiral_status spiral_set_candidate_budget(uint64_t budget);
SPIRAL_API uint64_t spiral_candidate_budget(void);

/* A configuration with every field at its default. */
SPIRAL_API spiral_status spiral_config_new(spiral_config** out);
SPIRAL_API spiral_status spiral_config_from_json(const char* json, spiral_config** out);
/* Sets one field from a JSON value, e.g. ("T", "100000") or ("A", "\"sign:-1\""). */
SPIRAL_API spiral_status spiral_config_set(spiral_config* config, const char* key, const char* json_value);
SPIRAL_API spiral_status spiral_config_to_json(const spiral_config* config, char** out);
SPIRAL_API void spiral_config_free(spiral_config* config);

SPIRAL_API spiral_status spiral_run(const spiral_config* config, spiral_report** out);

/* Runs the acceptance suite. The report is produced even when a criterion
 * fails; the status is then SPIRAL_ACCEPTANCE_FAILURE. */
SPIRAL_API spiral_status spiral_verify(int quick, uint64_t seed, int threads, spiral_report** out);

SPIRAL_API spiral_status spiral_report_json(const spiral_report* report, char** out);
/* CSV trace; an empty string when the experiment has none. */
SPIRAL_API spiral_status spiral_report_csv(const spiral_report* report, char** out);
/* Per-criterion timings of a verify report (JSON array); "[]" otherwise. */
SPIRAL_API spiral_status spiral_report_timings(const spiral_report* report, char** out);
SPIRAL_API void spiral_report_free(spiral_report* report);

#ifdef __cplusplus
}
#endif

#endif
