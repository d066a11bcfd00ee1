#ifndef GEOMATCH_H
#define GEOMATCH_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GmStatus {
  GM_STATUS_OK = 0,
  GM_STATUS_NULL_POINTER = 1,
  GM_STATUS_INVALID_INPUT = 2,
  GM_STATUS_BUFFER_TOO_SMALL = 3,
  GM_STATUS_INTERNAL = 4,
} GmStatus;

/**
 * A point-set instance.
 */
typedef struct GmInstance GmInstance;

/**
 * A solved cover.
 */
typedef struct GmSolution GmSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call on the same thread.
 */
const char *gm_last_error_message(void);

/**
 * Builds an instance from interleaved `x, y` coordinates: `s_xy` holds
 * `2 * ns` values and `t_xy` holds `2 * nt`.
 *
 * # Safety
 * The arrays must be readable for the given lengths and `out` writable.
 */
enum GmStatus gm_instance_new(const double *s_xy,
                              size_t ns,
                              const double *t_xy,
                              size_t nt,
                              struct GmInstance **out);

/**
 * Parses instance JSON or the whitespace text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum GmStatus gm_instance_from_json(const char *text, struct GmInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be used afterwards.
 */
void gm_instance_free(struct GmInstance *inst);

/**
 * Solves with `algo` (`"exact"`, `"greedy2"` or `"gt"`). `eps` is used by
 * `gt` only; pass NaN for the other algorithms.
 *
 * # Safety
 * `inst` must be a live handle, `algo` NUL-terminated and `out` writable.
 */
enum GmStatus gm_solve(const struct GmInstance *inst,
                       const char *algo,
                       double eps,
                       struct GmSolution **out);

/**
 * Cost of the cover, or NaN for a null handle.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
double gm_solution_cost(const struct GmSolution *sol);

/**
 * Number of pairs in the cover, 0 for a null handle.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
size_t gm_solution_pair_count(const struct GmSolution *sol);

/**
 * Writes the pairs as `s0, t0, s1, t1, ...` into `buf`, which holds `cap`
 * values; `cap` must be at least twice the pair count.
 *
 * # Safety
 * `sol` must be a live handle and `buf` writable for `cap` values.
 */
enum GmStatus gm_solution_pairs(const struct GmSolution *sol, size_t *buf, size_t cap);

/**
 * Solution JSON; release with [`gm_string_free`]. Null on failure.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
char *gm_solution_to_json(const struct GmSolution *sol);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gm_string_free(char *s);

/**
 * # Safety
 * `sol` must come from this library and not be used afterwards.
 */
void gm_solution_free(struct GmSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOMATCH_H */
