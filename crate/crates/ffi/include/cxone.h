#ifndef CXONE_H
#define CXONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum cx_status {
  CX_STATUS_OK = 0,
  CX_STATUS_NULL_POINTER = 1,
  CX_STATUS_INVALID_UTF8 = 2,
  CX_STATUS_MALFORMED_INPUT = 3,
  CX_STATUS_PRECONDITION = 4,
  CX_STATUS_BUFFER_TOO_SMALL = 5,
  CX_STATUS_PANIC = 6,
} cx_status;

/**
 * Torus fixed points of a coadjoint orbit of type B or D.
 */
typedef struct cx_orbit_t cx_orbit_t;

/**
 * Subgroup of a torus acting linearly on ℂⁿ.
 */
typedef struct cx_rep_t cx_rep_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cx_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cx_string_free(char *s);

/**
 * Parses `{"n": .., "presentation": "image"|"kernel", "matrix": [[..]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum cx_status cx_rep_from_json(const char *json, struct cx_rep_t **out);

/**
 * # Safety
 * `rep` must come from [`cx_rep_from_json`] and not have been freed.
 */
void cx_rep_free(struct cx_rep_t *rep);

/**
 * # Safety
 * `rep` must be a live handle and `n` writable.
 */
enum cx_status cx_rep_n(const struct cx_rep_t *rep, size_t *n);

/**
 * Dimension of H.
 *
 * # Safety
 * `rep` must be a live handle and `h` writable.
 */
enum cx_status cx_rep_h(const struct cx_rep_t *rep, size_t *h);

/**
 * # Safety
 * `rep` must be a live handle and `out` writable.
 */
enum cx_status cx_rep_is_onto(const struct cx_rep_t *rep, bool *out);

/**
 * # Safety
 * `rep` must be a live handle and `out` writable.
 */
enum cx_status cx_rep_is_proper(const struct cx_rep_t *rep, bool *out);

/**
 * Writes the exponents ξ into `buf`. `len` receives n; if `cap < n` nothing
 * is written and `CX_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `rep` must be a live handle, `len` writable, and `buf` valid for `cap` writes.
 */
enum cx_status cx_rep_defining_polynomial(const struct cx_rep_t *rep,
                                          int64_t *buf,
                                          size_t cap,
                                          size_t *len);

/**
 * Whether the orbit through points with nonzero coordinates exactly at
 * `support[0..len]` (0-based) is exceptional.
 *
 * # Safety
 * `rep` must be a live handle, `support` valid for `len` reads, `out` writable.
 */
enum cx_status cx_rep_is_exceptional_orbit(const struct cx_rep_t *rep,
                                           const size_t *support,
                                           size_t len,
                                           bool *out);

/**
 * Parses `{"family": "B"|"D", "rank": k, "base_point": ["p/q", ..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum cx_status cx_orbit_from_json(const char *json, struct cx_orbit_t **out);

/**
 * # Safety
 * `orbit` must come from [`cx_orbit_from_json`] and not have been freed.
 */
void cx_orbit_free(struct cx_orbit_t *orbit);

/**
 * Number of torus fixed points.
 *
 * # Safety
 * `orbit` must be a live handle and `out` writable.
 */
enum cx_status cx_orbit_fixed_point_count(const struct cx_orbit_t *orbit, size_t *out);

/**
 * Packing report as JSON, same layout as the `packing-check` command.
 *
 * # Safety
 * `orbit` must be a live handle and `out` writable.
 */
enum cx_status cx_orbit_packing_report(const struct cx_orbit_t *orbit, char **out);

/**
 * Runs a CLI subcommand (e.g. `"defining-poly"`) on a JSON document.
 * `samples` of 0 and `tol` ≤ 0 select the defaults. On success `out` holds the
 * report; on a malformed-input or precondition failure it holds the JSON error object.
 *
 * # Safety
 * String arguments must be NUL-terminated and `out` writable.
 */
enum cx_status cx_run_json(const char *subcommand,
                           const char *input,
                           uint64_t seed,
                           size_t samples,
                           double tol,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CXONE_H */
