/*
 * Copyright 2026 the valguard authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the valguard model-validation engine.
 *
 * Conventions:
 *   - Every fallible call returns a vg_status; VG_OK is 0 and the nonzero
 *     codes match the CLI exit codes.
 *   - When a call fails and `error` is non-NULL, *error receives a malloc'd
 *     message the caller frees with vg_string_free.
 *   - Returned strings (reports, summaries) are also freed with
 *     vg_string_free.
 *   - vg_dataset is an opaque handle; destroy it with vg_dataset_free.
 */
#ifndef VALGUARD_H
#define VALGUARD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define VG_API __attribute__((visibility("default")))
#else
#define VG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vg_status {
  VG_OK = 0,
  VG_ERROR_CONFIG = 2,     /* malformed or conflicting configuration */
  VG_ERROR_DATA = 3,       /* unusable input data or infeasible split */
  VG_ERROR_DEGENERATE = 4, /* degenerate computation (constant y, zero variance, ...) */
  VG_ERROR_INTERNAL = 5
} vg_status;

typedef struct vg_dataset vg_dataset;

/* Library version string, e.g. "1.0.0"; owned by the library. */
VG_API const char* vg_version(void);

/* Frees any string this API handed out. NULL is a no-op. */
VG_API void vg_string_free(char* s);

/* Loads a CSV file. y_cols/group_col/time_col are column selectors
 * (header names or zero-based indices, y_cols comma separated); pass NULL
 * or "" to skip. */
VG_API vg_status vg_dataset_load_csv(const char* path, const char* y_cols,
                                     const char* group_col, const char* time_col,
                                     vg_dataset** out, char** error);

/* Generates a named simulation scenario from a JSON spec:
 *   {"name": "fig5_highdim_null", "seed": 7, "params": {...}} */
VG_API vg_status vg_dataset_from_scenario(const char* scenario_json, vg_dataset** out,
                                          char** error);

VG_API vg_status vg_dataset_dims(const vg_dataset* ds, size_t* rows, size_t* x_cols,
                                 size_t* y_cols);

VG_API vg_status vg_dataset_write_csv(const vg_dataset* ds, const char* path, char** error);

VG_API void vg_dataset_free(vg_dataset* ds);

/* Parses and validates a run config; on success *normalized_json receives
 * the canonical form (defaults filled in). */
VG_API vg_status vg_validate_config(const char* config_json, char** normalized_json,
                                    char** error);

/* Executes a run config, writing report.json, timings.json and curve CSVs
 * under out_dir. overrides_json may be NULL or an object with any of:
 *   {"seed": 42, "threads": 2, "demonstrate_leakage": true}
 * On success *report_json (if non-NULL) receives the report document. */
VG_API vg_status vg_run(const char* config_json, const char* out_dir,
                        const char* overrides_json, char** report_json, char** error);

/* Regenerates the data behind simulated experiment 1..6 into out_dir and
 * returns the summary JSON. */
VG_API vg_status vg_reproduce_figure(int figure_id, uint64_t seed, const char* out_dir,
                                     int threads, char** summary_json, char** error);

#ifdef __cplusplus
}
#endif

#endif /* VALGUARD_H */
