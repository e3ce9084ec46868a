#ifndef DFSTAB_H
#define DFSTAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call status. Values 0 to 4 match the command-line exit codes.
 */
typedef enum DfsStatus {
  DFS_STATUS_OK = 0,
  /**
   * The check ran and its verdict is negative.
   */
  DFS_STATUS_NEGATIVE = 1,
  DFS_STATUS_PARSE = 2,
  DFS_STATUS_NUMERICAL = 3,
  DFS_STATUS_NOT_REPRESENTABLE = 4,
  DFS_STATUS_NULL_POINTER = 5,
  DFS_STATUS_INVALID_ARGUMENT = 6,
  DFS_STATUS_PANIC = 7,
} DfsStatus;

typedef enum DfsKind {
  DFS_KIND_DFS = 0,
  DFS_KIND_SDFS = 1,
} DfsKind;

typedef enum DfsFormalism {
  DFS_FORMALISM_ZETA = 0,
  DFS_FORMALISM_VEC = 1,
} DfsFormalism;

/**
 * Opaque model handle.
 */
typedef struct DfsModel DfsModel;

/**
 * Opaque report handle: verdict plus `key = value` text.
 */
typedef struct DfsReport DfsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next failure.
 */
const char *dfs_last_error_message(void);

/**
 * Loads a model file or builds a preset (`example1`, `example2`, `example_hl`) with `r` and `gamma`.
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be writable.
 */
enum DfsStatus dfs_model_load(const char *spec,
                              double r,
                              double gamma,
                              struct DfsModel **out);

/**
 * Parses model JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum DfsStatus dfs_model_parse_json(const char *json, struct DfsModel **out);

/**
 * # Safety
 * `model` must come from a `dfs_model_*` constructor and not be freed twice.
 */
void dfs_model_free(struct DfsModel *model);

/**
 * Qubit count, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t dfs_model_n_qubits(const struct DfsModel *model);

/**
 * Builds the stabilizers and verifies the code. Returns `OK` or `NEGATIVE`; the report is written either way.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DfsStatus dfs_check(const struct DfsModel *model,
                         enum DfsKind kind,
                         struct DfsReport **out);

/**
 * Encodes the stabilizers in the chosen formalism and tests dual membership.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DfsStatus dfs_encode(const struct DfsModel *model,
                          enum DfsFormalism formalism,
                          enum DfsKind kind,
                          struct DfsReport **out);

/**
 * Runs the probing protocol for `n = 1..=n_max`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum DfsStatus dfs_metrology(const struct DfsModel *model, size_t n_max, struct DfsReport **out);

/**
 * Evolves the pure state with amplitudes `re[i] + i im[i]` to time `t`; writes the minimum purity seen.
 * A nonpositive `dt` selects the model default.
 *
 * # Safety
 * `re` and `im` must each point to `len` doubles; `min_purity` must be writable.
 */
enum DfsStatus dfs_simulate_purity(const struct DfsModel *model,
                                   const double *re,
                                   const double *im,
                                   size_t len,
                                   double t,
                                   double dt,
                                   double *min_purity);

/**
 * Verdict stored in the report; false for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool dfs_report_passed(const struct DfsReport *report);

/**
 * `key = value` text, owned by the report.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
const char *dfs_report_text(const struct DfsReport *report);

/**
 * # Safety
 * `report` must come from a `dfs_*` call and not be freed twice.
 */
void dfs_report_free(struct DfsReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DFSTAB_H */
