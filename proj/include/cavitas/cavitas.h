/* Copyright 2026 The Cavitas Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/**
 * @file cavitas.h
 * @brief C interface to the cavitas cavity-QED simulator.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching destroy function. Every fallible call returns a cavitas_status;
 * on failure cavitas_last_error() describes the problem for the calling thread.
 */

#ifndef CAVITAS_CAVITAS_H
#define CAVITAS_CAVITAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(CAVITAS_BUILDING_LIBRARY)
#define CAVITAS_API __attribute__((visibility("default")))
#else
#define CAVITAS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cavitas_status {
  CAVITAS_OK = 0,
  CAVITAS_E_INVALID_CONFIG = 1,
  CAVITAS_E_RANGE = 2,
  CAVITAS_E_TRUNCATION = 3,
  CAVITAS_E_PRECONDITION = 4,
  CAVITAS_E_NUMERICAL = 5,
  CAVITAS_E_IO = 6,
  CAVITAS_E_NULL_ARGUMENT = 7,
  CAVITAS_E_INTERNAL = 8
} cavitas_status;

typedef struct cavitas_config cavitas_config;
typedef struct cavitas_series cavitas_series;
typedef struct cavitas_report cavitas_report;

/* One sampled row; t_us is in microseconds. */
typedef struct cavitas_row {
  double phi;
  double t_us;
  double p;
  double p_stderr;
  double p_upper;
  double p_lower;
  int beyond_flight_limit;
} cavitas_row;

CAVITAS_API const char* cavitas_version(void);
/* Message of the last failed call on this thread, "" if none. */
CAVITAS_API const char* cavitas_last_error(void);
CAVITAS_API const char* cavitas_status_name(cavitas_status status);

CAVITAS_API cavitas_status cavitas_config_create(cavitas_config** out);
CAVITAS_API void cavitas_config_destroy(cavitas_config* config);
/* Applies a flat key=value file on top of the current values. */
CAVITAS_API cavitas_status cavitas_config_load_file(cavitas_config* config, const char* path);
CAVITAS_API cavitas_status cavitas_config_set(cavitas_config* config, const char* key,
                                              const char* value);
/* Copies the resolved value of key into buf; fails with RANGE if buf is too small. */
CAVITAS_API cavitas_status cavitas_config_get(const cavitas_config* config, const char* key,
                                              char* buf, size_t len);
CAVITAS_API cavitas_status cavitas_config_validate(const cavitas_config* config);

/* Runs the series-producing modes: spontaneous, echo, thermal, envelopes. */
CAVITAS_API cavitas_status cavitas_run(const cavitas_config* config, cavitas_series** out);
CAVITAS_API void cavitas_series_destroy(cavitas_series* series);
CAVITAS_API size_t cavitas_series_length(const cavitas_series* series);
CAVITAS_API cavitas_status cavitas_series_row(const cavitas_series* series, size_t index,
                                              cavitas_row* out);
CAVITAS_API size_t cavitas_series_warning_count(const cavitas_series* series);
CAVITAS_API const char* cavitas_series_warning(const cavitas_series* series, size_t index);
/* path "-" writes to standard output. */
CAVITAS_API cavitas_status cavitas_series_write_csv(const cavitas_series* series,
                                                    const char* path);

CAVITAS_API cavitas_status cavitas_validate(const cavitas_config* config, cavitas_report** out);
CAVITAS_API void cavitas_report_destroy(cavitas_report* report);
CAVITAS_API int cavitas_report_passed(const cavitas_report* report);
CAVITAS_API size_t cavitas_report_count(const cavitas_report* report);
CAVITAS_API cavitas_status cavitas_report_check(const cavitas_report* report, size_t index,
                                                const char** name, int* passed,
                                                const char** measured);
CAVITAS_API cavitas_status cavitas_report_write(const cavitas_report* report, const char* path);

/* Revival table for n_atoms atoms as CSV. */
CAVITAS_API cavitas_status cavitas_schedule_write(int n_atoms, const char* path);

/* Writes a JSON manifest: resolved config, version, seed, timestamps, outputs.
 * series may be NULL; its warnings are recorded otherwise. */
CAVITAS_API cavitas_status cavitas_manifest_write(const cavitas_config* config,
                                                  const cavitas_series* series,
                                                  const char* started,
                                                  const char* const* outputs, size_t n_outputs,
                                                  const char* path);
/* Current UTC time as ISO-8601, valid until the next call on this thread. */
CAVITAS_API const char* cavitas_utc_now(void);

#ifdef __cplusplus
}
#endif

#endif /* CAVITAS_CAVITAS_H */
