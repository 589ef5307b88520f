/*
 * Copyright 2026 The essecon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the storage scheduling library.
 *
 * A session holds a configuration, a time series and the result of the last
 * experiment. Every call that can fail returns an essecon_status; the message
 * of the most recent failure on a session is available from
 * essecon_last_error(). Strings returned by the library stay valid until the
 * next call on the same session or until the session is destroyed. */

#ifndef ESSECON_ESSECON_H
#define ESSECON_ESSECON_H

#include <stddef.h>
#include <stdint.h>

#if defined(ESSECON_BUILDING_LIBRARY)
#define ESSECON_API __attribute__((visibility("default")))
#else
#define ESSECON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct essecon_session essecon_session;

typedef enum essecon_status {
  ESSECON_OK = 0,
  ESSECON_ERR_ARGUMENT = 1,   /* null pointer or value out of range */
  ESSECON_ERR_IO = 2,         /* file could not be opened or written */
  ESSECON_ERR_PARSE = 3,      /* malformed CSV or config file */
  ESSECON_ERR_VALIDATION = 4, /* inputs violate a model invariant */
  ESSECON_ERR_SOLVER = 5,     /* optimization failed */
  ESSECON_ERR_STATE = 6,      /* call out of order, e.g. no series loaded */
  ESSECON_ERR_INTERNAL = 7
} essecon_status;

typedef enum essecon_total {
  ESSECON_R_SC = 0,
  ESSECON_R_FR = 1,
  ESSECON_R_SR = 2,
  ESSECON_R_BR = 3,
  ESSECON_AGING_COST = 4,
  ESSECON_NET_PROFIT = 5,
  ESSECON_BASELINE_PROFIT = 6,
  ESSECON_ESS_ATTRIBUTABLE_PROFIT = 7
} essecon_total;

ESSECON_API const char* essecon_version(void);
ESSECON_API const char* essecon_status_string(essecon_status status);

/* Creates a session holding the default two-unit configuration. */
ESSECON_API essecon_status essecon_session_create(essecon_session** out);
ESSECON_API void essecon_session_destroy(essecon_session* session);
ESSECON_API const char* essecon_last_error(const essecon_session* session);

/* strict != 0 rejects unknown sections and keys. If the config names a
 * series file it is loaded as well. */
ESSECON_API essecon_status essecon_load_config(essecon_session* session, const char* path,
                                               int strict);
ESSECON_API essecon_status essecon_load_series(essecon_session* session, const char* path);
ESSECON_API essecon_status essecon_series_length(const essecon_session* session, size_t* out);

/* "single", "alpha-sweep", "horizon-sweep" or "forecast-study". */
ESSECON_API essecon_status essecon_set_experiment(essecon_session* session, const char* name);
/* Replaces the forecast seed list with one seed and sets the forecast seed. */
ESSECON_API essecon_status essecon_set_seed(essecon_session* session, uint64_t seed);
ESSECON_API essecon_status essecon_set_horizon(essecon_session* session, int horizon);

/* Runs the configured experiment. When out_dir is non-null the report files
 * are written there. */
ESSECON_API essecon_status essecon_run(essecon_session* session, const char* out_dir);

/* Results of the last run. run_index selects a scenario (0 for single). */
ESSECON_API essecon_status essecon_result_run_count(const essecon_session* session, size_t* out);
ESSECON_API essecon_status essecon_result_total(const essecon_session* session, size_t run_index,
                                                essecon_total which, double* out);
/* summary.json content of the last run. */
ESSECON_API essecon_status essecon_result_summary(essecon_session* session, const char** out);

/* Writes the bundled synthetic week and a matching config. Either path may be
 * null to skip that file. */
ESSECON_API essecon_status essecon_generate_fixture(const char* csv_path, const char* config_path,
                                                    uint64_t seed);

/* Writes the problem for decision time t over the configured horizon in the
 * debug text format, starting from the configured initial SOC. */
ESSECON_API essecon_status essecon_dump_problem(essecon_session* session, int t,
                                                const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ESSECON_ESSECON_H */
