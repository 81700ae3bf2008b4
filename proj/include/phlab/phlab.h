/* C interface to phlab. Handles are opaque; every call returns a phlab_status and the
 * message of the most recent failure on the calling thread is available through
 * phlab_last_error(). Strings returned as char* are owned by the caller and released
 * with phlab_string_free(); const char* results live as long as their handle. */
#ifndef PHLAB_H
#define PHLAB_H

#include <stddef.h>

#if defined(PHLAB_BUILDING_LIBRARY)
#define PHLAB_API __attribute__((visibility("default")))
#else
#define PHLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Same values as phlab::ErrorCode. */
typedef enum phlab_status {
  PHLAB_OK = 0,
  PHLAB_INVALID_ARGUMENT = 1,
  PHLAB_CONFIG_ERROR = 2,
  PHLAB_ROOT_NOT_CONVERGED = 3,
  PHLAB_NOT_A_FIXED_POINT = 4,
  PHLAB_SPECTRUM_VIOLATION = 5,
  PHLAB_NON_SIMPLE_SPECTRUM = 6,
  PHLAB_BRANCH_EXPLOSION = 7,
  PHLAB_DEPTH_MISMATCH = 8,
  PHLAB_INSUFFICIENT_DEPTH = 9,
  PHLAB_DEPTH_TOO_SMALL = 10,
  PHLAB_SINGULAR_JACOBIAN = 11,
  PHLAB_ILL_CONDITIONED_INTERSECTION = 12,
  PHLAB_NO_CENTER_DIRECTION = 13,
  PHLAB_NO_STABLE_DIRECTION = 14,
  PHLAB_BUDGET_EXCEEDED = 15,
  PHLAB_NOT_SEPARATED = 16,
  PHLAB_RESAMPLING_OVERFLOW = 17,
  PHLAB_CONSISTENCY_VIOLATION = 18,
  PHLAB_EMPTY_COLLECTION = 19,
  PHLAB_NO_GOOD_SEGMENTS = 20,
  PHLAB_NO_INTERSECTION = 21,
  PHLAB_DEPTH_EXHAUSTED = 22,
  PHLAB_NOT_GOOD = 23,
  PHLAB_INTERNAL = 24
} phlab_status;

typedef struct phlab_system phlab_system;
typedef struct phlab_result phlab_result;

PHLAB_API const char* phlab_version(void);
PHLAB_API const char* phlab_status_name(phlab_status status);
/* Thread-local; empty string when the last call on this thread succeeded. */
PHLAB_API const char* phlab_last_error(void);
PHLAB_API void phlab_string_free(char* s);

/* 0 means hardware concurrency. Results do not depend on this setting. */
PHLAB_API phlab_status phlab_set_threads(int threads);

/* Systems */
PHLAB_API phlab_status phlab_system_load(const char* path, phlab_system** out);
PHLAB_API phlab_status phlab_system_from_text(const char* config_text, phlab_system** out);
PHLAB_API void phlab_system_free(phlab_system* sys);
PHLAB_API int phlab_system_dimension(const phlab_system* sys);
PHLAB_API int phlab_system_has_center(const phlab_system* sys);
PHLAB_API long long phlab_system_degree(const phlab_system* sys);
/* Writes dimension() eigenvalues ordered by decreasing modulus. */
PHLAB_API phlab_status phlab_system_eigenvalues(const phlab_system* sys, double* out);
/* y = f(x) on the torus; x and y hold dimension() coordinates. */
PHLAB_API phlab_status phlab_system_apply(const phlab_system* sys, const double* x, double* y);
PHLAB_API phlab_status phlab_system_to_config(const phlab_system* sys, char** out);

/* Commands. The request is a JSON object whose keys mirror the CLI options:
 *   {"command": "entropy", "config_path": "configs/cat.cfg", "seed": 1, "delta": 0.1}
 * A result is produced whenever the request parses, including for failed runs; the
 * returned status is then the run's error code. */
PHLAB_API size_t phlab_command_count(void);
PHLAB_API const char* phlab_command_name(size_t index);
PHLAB_API phlab_status phlab_run_json(const char* request_json, phlab_result** out);
PHLAB_API void phlab_result_free(phlab_result* res);
/* 0 ok, 2 config error, 3 numerical failure. */
PHLAB_API int phlab_result_exit_code(const phlab_result* res);
PHLAB_API const char* phlab_result_json(const phlab_result* res);
PHLAB_API size_t phlab_result_warning_count(const phlab_result* res);
PHLAB_API const char* phlab_result_warning(const phlab_result* res, size_t index);
PHLAB_API size_t phlab_result_artifact_count(const phlab_result* res);
PHLAB_API const char* phlab_result_artifact_name(const phlab_result* res, size_t index);
PHLAB_API const char* phlab_result_artifact_content(const phlab_result* res, size_t index);
PHLAB_API phlab_status phlab_result_write(const phlab_result* res, const char* directory);

#ifdef __cplusplus
}
#endif

#endif
