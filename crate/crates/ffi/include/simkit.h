#ifndef SIMKIT_H
#define SIMKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SIMKIT_METRIC_DOT 0

#define SIMKIT_METRIC_COSINE 1

#define SIMKIT_METRIC_OVERLAP 2

#define SIMKIT_METRIC_TANH 3

#define SIMKIT_FORMAT_MARKDOWN 0

#define SIMKIT_FORMAT_CSV 1

#define SIMKIT_FORMAT_JSON 2

typedef enum SimkitStatus {
  SIMKIT_STATUS_OK = 0,
  SIMKIT_STATUS_NULL_POINTER = 1,
  SIMKIT_STATUS_INVALID_ARGUMENT = 2,
  SIMKIT_STATUS_DIMENSION = 3,
  SIMKIT_STATUS_NUMERIC = 4,
  SIMKIT_STATUS_LENGTH = 5,
  SIMKIT_STATUS_EMPTY_INPUT = 6,
  SIMKIT_STATUS_DEGENERATE = 7,
  SIMKIT_STATUS_BUDGET_EXCEEDED = 8,
  SIMKIT_STATUS_FORMAT = 9,
  SIMKIT_STATUS_RANGE = 10,
  SIMKIT_STATUS_LABEL = 11,
  SIMKIT_STATUS_INTEGRITY = 12,
  SIMKIT_STATUS_CONFIG = 13,
  SIMKIT_STATUS_IO = 14,
  SIMKIT_STATUS_PANIC = 15,
} SimkitStatus;

/**
 * Opaque set of embedding pairs.
 */
typedef struct SimkitPairs SimkitPairs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length plus one, or 0 if the
 * last call succeeded.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t simkit_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *simkit_version(void);

/**
 * Scores one pair of `dim`-element vectors.
 *
 * # Safety
 * `x` and `y` must point to `dim` floats; `out` must be writable.
 */
enum SimkitStatus simkit_score(uint32_t metric,
                               const float *x,
                               const float *y,
                               size_t dim,
                               double epsilon,
                               double *out);

/**
 * Loads an EMBP file into a new pair set.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SimkitStatus simkit_pairs_open(const char *path, struct SimkitPairs **out);

/**
 * Builds a pair set from row-major buffers: `xs` and `ys` hold
 * `n_pairs * dim` floats, `golds` holds `n_pairs` scores in [0, 1].
 *
 * # Safety
 * Buffers must be valid for the stated lengths; `out` must be writable.
 */
enum SimkitStatus simkit_pairs_new(size_t dim,
                                   size_t n_pairs,
                                   const float *xs,
                                   const float *ys,
                                   const float *golds,
                                   struct SimkitPairs **out);

/**
 * Releases a pair set. Null is ignored.
 *
 * # Safety
 * `pairs` must come from this library and not be freed twice.
 */
void simkit_pairs_free(struct SimkitPairs *pairs);

/**
 * Number of pairs, or 0 for a null handle.
 *
 * # Safety
 * `pairs` must be null or a live handle.
 */
size_t simkit_pairs_len(const struct SimkitPairs *pairs);

/**
 * Vector dimension, or 0 for a null or empty set.
 *
 * # Safety
 * `pairs` must be null or a live handle.
 */
size_t simkit_pairs_dim(const struct SimkitPairs *pairs);

/**
 * Writes one score per pair into `out`, which must hold `out_len >= len` doubles.
 *
 * # Safety
 * `pairs` must be a live handle; `out` must point to `out_len` doubles.
 */
enum SimkitStatus simkit_pairs_score(const struct SimkitPairs *pairs,
                                     uint32_t metric,
                                     double epsilon,
                                     double *out,
                                     size_t out_len);

/**
 * MSE and Spearman correlation of one metric against the set's golds.
 * `out_rho_defined` is set to 0 when the correlation is undefined.
 *
 * # Safety
 * `pairs` must be a live handle; out-pointers must be writable.
 */
enum SimkitStatus simkit_pairs_evaluate(const struct SimkitPairs *pairs,
                                        uint32_t metric,
                                        double epsilon,
                                        double *out_mse,
                                        double *out_rho,
                                        uint8_t *out_rho_defined);

/**
 * Writes the set as an EMBP file. If `sha256_out` is non-null it receives
 * the 64 hex digits plus a NUL (65 bytes).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `sha256_out` null or 65 writable bytes.
 */
enum SimkitStatus simkit_pairs_write(const struct SimkitPairs *pairs,
                                     const char *path,
                                     char *sha256_out);

/**
 * Tie-aware Spearman correlation of two length-`n` series.
 *
 * # Safety
 * `a` and `b` must point to `n` doubles; `out` must be writable.
 */
enum SimkitStatus simkit_spearman(const double *a, const double *b, size_t n, double *out);

/**
 * One-sided Wilcoxon signed-rank test on paired differences
 * (baseline error minus candidate error). `out_exact` is 1 when the exact
 * null distribution was used.
 *
 * # Safety
 * `d` must point to `n` doubles; out-pointers must be writable.
 */
enum SimkitStatus simkit_wilcoxon(const double *d,
                                  size_t n,
                                  double *out_w_plus,
                                  double *out_p,
                                  size_t *out_n_effective,
                                  uint8_t *out_exact);

/**
 * Seeded percentile-bootstrap interval for the mean of `d`.
 *
 * # Safety
 * `d` must point to `n` doubles; out-pointers must be writable.
 */
enum SimkitStatus simkit_bootstrap_ci(const double *d,
                                      size_t n,
                                      size_t n_resamples,
                                      double level,
                                      uint64_t seed,
                                      double *out_lower,
                                      double *out_upper);

/**
 * Runs an evaluation config and renders it in `format`
 * (`SIMKIT_FORMAT_*`). The returned string must be released with
 * [`simkit_string_free`]. Per-dataset failures are part of the report, not
 * an error status.
 *
 * # Safety
 * `config_path` must be a NUL-terminated string; `out` must be writable.
 */
enum SimkitStatus simkit_run_report(const char *config_path, uint32_t format, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void simkit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMKIT_H */
