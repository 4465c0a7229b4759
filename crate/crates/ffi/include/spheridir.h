#ifndef SPHERIDIR_H
#define SPHERIDIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpheridirStatus {
  SPHERIDIR_STATUS_OK = 0,
  SPHERIDIR_STATUS_INVALID_INPUT = 1,
  SPHERIDIR_STATUS_DIMENSION_MISMATCH = 2,
  SPHERIDIR_STATUS_DOMAIN = 3,
  SPHERIDIR_STATUS_PRECONDITION = 4,
  SPHERIDIR_STATUS_QUADRATURE = 5,
  SPHERIDIR_STATUS_WINDOW = 6,
  SPHERIDIR_STATUS_NOT_PSD = 7,
  SPHERIDIR_STATUS_PARSE = 8,
  SPHERIDIR_STATUS_IO = 9,
  SPHERIDIR_STATUS_NULL_POINTER = 10,
  SPHERIDIR_STATUS_UTF8 = 11,
  SPHERIDIR_STATUS_PANIC = 12,
} SpheridirStatus;

typedef enum SpheridirVerdict {
  SPHERIDIR_VERDICT_ISOMETRY = 0,
  SPHERIDIR_VERDICT_CONCAVE = 1,
  SPHERIDIR_VERDICT_CONVEX = 2,
  SPHERIDIR_VERDICT_NEITHER = 3,
  SPHERIDIR_VERDICT_INCONCLUSIVE = 4,
} SpheridirVerdict;

/**
 * A boundary measure on the unit sphere.
 */
typedef struct SpheridirMeasure SpheridirMeasure;

/**
 * A truncated commuting tuple with its Gram table.
 */
typedef struct SpheridirTuple SpheridirTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on this thread; do not free.
 */
const char *spheridir_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void spheridir_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *spheridir_version(void);

/**
 * Builds a measure from its JSON descriptor, e.g.
 * `{"type":"lambda_c","d":2,"lambda":"1","c":["0","0"]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_measure_from_json(const char *json, struct SpheridirMeasure **out);

/**
 * # Safety
 * `m` must come from [`spheridir_measure_from_json`] or be null.
 */
void spheridir_measure_free(struct SpheridirMeasure *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_measure_dim(const struct SpheridirMeasure *m, size_t *out);

/**
 * Moment table `∫ζ^α ζ̄^β dμ` for `|α|, |β| ≤ degree`, as table JSON.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_measure_moments_json(const struct SpheridirMeasure *m,
                                                    uint32_t degree,
                                                    char **out);

/**
 * Richter's identity for polynomials `p`, `q` (JSON,
 * `{"d":2,"terms":[{"alpha":[1,0],"coeff":["1"]}]}`) and order `k`. Writes
 * the report JSON to `report` and whether it passed to `pass`.
 *
 * # Safety
 * All pointers must be valid; strings nul-terminated.
 */
enum SpheridirStatus spheridir_verify_richter(const struct SpheridirMeasure *m,
                                              const char *p_json,
                                              const char *q_json,
                                              uint32_t k,
                                              uint64_t samples,
                                              uint64_t seed,
                                              char **report,
                                              bool *pass);

/**
 * Multiplication tuple on the truncation of a space given as JSON, e.g.
 * `{"type":"hp","d":2,"p":"1"}`, with degree bound `degree`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_tuple_from_space_json(const char *json,
                                                     uint32_t degree,
                                                     struct SpheridirTuple **out);

/**
 * Tuple from its wire form: a Gram table and sparse operator triplets.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_tuple_from_json(const char *json, struct SpheridirTuple **out);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_tuple_to_json(const struct SpheridirTuple *t, char **out);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void spheridir_tuple_free(struct SpheridirTuple *t);

/**
 * m-isometry verdict on the largest window the truncation supports.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_tuple_classify(const struct SpheridirTuple *t,
                                              uint32_t m,
                                              enum SpheridirVerdict *out);

/**
 * Moment table of an m-isometry, as table JSON.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_tuple_moment_kernel_json(const struct SpheridirTuple *t,
                                                        uint32_t m,
                                                        char **out);

/**
 * Positivity and spherical Toeplitz checks of a moment table given as JSON.
 * Writes a JSON object with the fields `psd`, `rank`, `min_eigenvalue`,
 * `toeplitz` and `toeplitz_residual`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SpheridirStatus spheridir_moment_check_json(const char *json, char **out);

/**
 * Runs a command-line invocation (`argv[0]` is the program name) and
 * returns its exit code: 0 pass, 1 verification failure, 2 input error.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings.
 */
int32_t spheridir_cli_run(size_t argc, const char *const *argv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHERIDIR_H */
