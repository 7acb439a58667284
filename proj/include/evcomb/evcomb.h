// Copyright 2026 The evcomb Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the evcomb evidence-combination engine.
 *
 * A session owns one evidence file: load it, solve it, then read the
 * maximum-likelihood JDV and the probability interval of each query.
 * Functions report failure through evcomb_status; the message of the most
 * recent failure is available from evcomb_session_error().
 *
 * Strings returned through char** are allocated by the library and must be
 * released with evcomb_string_free(). Pointers returned as const char* stay
 * valid until the next call on the same session.
 *
 * A session is not thread-safe; distinct sessions may be used concurrently.
 */
#ifndef EVCOMB_EVCOMB_H_
#define EVCOMB_EVCOMB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EVCOMB_BUILDING_LIBRARY)
#    define EVCOMB_API __declspec(dllexport)
#  else
#    define EVCOMB_API __declspec(dllimport)
#  endif
#else
#  define EVCOMB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct evcomb_session evcomb_session;

typedef enum evcomb_status {
  EVCOMB_OK = 0,
  EVCOMB_ERR_PARSE = 1,
  EVCOMB_ERR_INFEASIBLE = 2,
  EVCOMB_ERR_CONTRADICTION = 3,
  EVCOMB_ERR_POLYNOMIALITY = 4,
  EVCOMB_ERR_NOT_CONVERGED = 5,
  EVCOMB_ERR_INVALID_ARGUMENT = 6,
  EVCOMB_ERR_IMPOSSIBLE_CONDITION = 7,
  EVCOMB_ERR_STATE = 8,
  EVCOMB_ERR_INTERNAL = 9
} evcomb_status;

typedef enum evcomb_format {
  EVCOMB_FORMAT_TEXT = 0,
  EVCOMB_FORMAT_JSON = 1
} evcomb_format;

/* Flags for evcomb_session_report. */
#define EVCOMB_REPORT_JDV 0x1
#define EVCOMB_REPORT_NULLSPACE 0x2

typedef struct evcomb_options {
  double tolerance;      /* relative stationarity tolerance, default 1e-9 */
  uint64_t max_iterations; /* default 10000 */
  int use_seed;          /* nonzero: perturb the start point with `seed` */
  uint64_t seed;
} evcomb_options;

typedef struct evcomb_interval {
  double lo;
  double hi;
  int degenerate;
  int open_endpoint;
} evcomb_interval;

EVCOMB_API const char* evcomb_version(void);
EVCOMB_API const char* evcomb_status_name(evcomb_status status);
/* Process exit code used by the command-line tool for a status. */
EVCOMB_API int evcomb_exit_code(evcomb_status status);

EVCOMB_API void evcomb_options_init(evcomb_options* options);

EVCOMB_API evcomb_session* evcomb_session_new(void);
EVCOMB_API void evcomb_session_free(evcomb_session* session);

EVCOMB_API evcomb_status evcomb_session_load(evcomb_session* session,
                                             const char* text);
/* Compile, maximize and answer the file's queries. `options` may be NULL. */
EVCOMB_API evcomb_status evcomb_session_solve(evcomb_session* session,
                                              const evcomb_options* options);

EVCOMB_API const char* evcomb_session_error(const evcomb_session* session);
/* Source line of the last error, 0 if none applies. */
EVCOMB_API size_t evcomb_session_error_line(const evcomb_session* session);

EVCOMB_API evcomb_status evcomb_session_log_likelihood(
    const evcomb_session* session, double* value);
EVCOMB_API evcomb_status evcomb_session_iterations(const evcomb_session* session,
                                                   uint64_t* iterations);
EVCOMB_API size_t evcomb_session_world_count(const evcomb_session* session);
/* Copies the JDV into `out`, which must hold world_count doubles. */
EVCOMB_API evcomb_status evcomb_session_jdv(const evcomb_session* session,
                                            double* out, size_t capacity);
EVCOMB_API evcomb_status evcomb_session_nullspace_dim(
    const evcomb_session* session, size_t* dimension);

EVCOMB_API size_t evcomb_session_query_count(const evcomb_session* session);
EVCOMB_API evcomb_status evcomb_session_query(const evcomb_session* session,
                                              size_t index,
                                              evcomb_interval* out);
/* Ad-hoc query such as "P(B | A)" against a solved session. */
EVCOMB_API evcomb_status evcomb_session_ask(evcomb_session* session,
                                            const char* query,
                                            evcomb_interval* out);

/* Renders the report. On a failed solve the report carries the error. */
EVCOMB_API evcomb_status evcomb_session_report(evcomb_session* session,
                                               evcomb_format format, int flags,
                                               char** out);
EVCOMB_API void evcomb_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* EVCOMB_EVCOMB_H_ */
