/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright (C) 2026 The depscan authors */
#ifndef DEPSCAN_DEPSCAN_H
#define DEPSCAN_DEPSCAN_H

/*
 * C interface to the depscan analysis core.
 *
 * Conventions:
 *  - Functions that can fail return ds_status, or NULL for handle/string
 *    constructors. On failure, *err (when non-NULL) receives a malloc'd
 *    message; release it with ds_string_free.
 *  - Every char* returned by the library is malloc'd and owned by the
 *    caller (ds_string_free), except ds_library_version which is static.
 *  - Handles are opaque; release them with the matching *_free. NULL is a
 *    no-op for every *_free.
 *  - Structured results are UTF-8 JSON documents, so bindings do not need
 *    struct layouts.
 */

#include <stddef.h>

#if defined(_WIN32)
#define DS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DS_API __attribute__((visibility("default")))
#else
#define DS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
  DS_OK = 0,
  DS_ERROR_INVALID_ARGUMENT = 1, /* NULL handle or malformed parameter text */
  DS_ERROR_LOAD = 2,             /* unreadable or unparseable input file  */
  DS_ERROR_INTERNAL = 3
} ds_status;

typedef struct ds_history ds_history; /* a library's release history */
typedef struct ds_usage ds_usage;     /* one application's usage facts */
typedef struct ds_report ds_report;   /* result of a repository scan  */

/* Library version as "major.minor.patch". Static storage; do not free. */
DS_API const char* ds_library_version(void);

/* Frees a string returned by any other function here. NULL is a no-op. */
DS_API void ds_string_free(char* s);

/* Debian-style version comparison: *out_cmp is <0, 0 or >0. */
DS_API ds_status ds_compare_versions(const char* a, const char* b, int* out_cmp, char** err);

/* Tests a version against a dependency range such as ">= 2.37.6, << 2.40".
 * An empty range accepts every version. *out_contains is 0 or 1. */
DS_API ds_status ds_range_contains(const char* range, const char* version, int* out_contains,
                                   char** err);

/* Loads a release-history manifest (JSON listing snapshot files). */
DS_API ds_history* ds_history_open(const char* manifest_path, char** err);
DS_API void ds_history_free(ds_history* h);

/* All incompatible changes between adjacent releases, as a JSON array. */
DS_API char* ds_history_changes_json(const ds_history* h, char** err);

/* Incompatible changes between two snapshot files. direction is "backward",
 * "forward" or "both". Returns a JSON array. */
DS_API char* ds_diff_snapshots_json(const char* snapshot_a, const char* snapshot_b,
                                    const char* direction, char** err);

/* Loads an application usage-facts file. */
DS_API ds_usage* ds_usage_open(const char* facts_path, char** err);
DS_API void ds_usage_free(ds_usage* u);

/* Dynamic-symbol imports of an ELF binary as a JSON array of
 * {"name", "version_tag"} objects. */
DS_API char* ds_elf_imports_json(const char* binary_path, char** err);

/* Runs detect + suggest for one library/application pair. depends_range is
 * a dependency range ("" accepts every version). Returns a single-finding
 * report document (schema "depscan-report/1"); *out_has_bugs (when
 * non-NULL) is set to 0 or 1. */
DS_API char* ds_detect_json(const ds_history* h, const ds_usage* u, const char* depends_range,
                            int* out_has_bugs, char** err);

/* Link-simulation ground truth for the same pair: the versions in the
 * accepted range whose resolution outcome differs from the version the
 * range pins as the build reference. Returns {"incompatible": [...]}. */
DS_API char* ds_oracle_json(const ds_history* h, const ds_usage* u, const char* depends_range,
                            char** err);

/* Scans a repository manifest; jobs caps the worker threads (0 means 1). */
DS_API ds_report* ds_scan_run(const char* repo_manifest_path, unsigned jobs, char** err);
DS_API void ds_report_free(ds_report* r);

/* 1 when the scan found at least one dependency bug. */
DS_API int ds_report_has_bugs(const ds_report* r);

/* Human-readable table, exactly as the command-line tool prints it. */
DS_API char* ds_report_render_text(const ds_report* r);

/* Machine-readable report (schema "depscan-report/1"). indent < 0 emits a
 * single line. */
DS_API char* ds_report_render_json(const ds_report* r, int indent);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEPSCAN_DEPSCAN_H */
