#ifndef WEIL_LAB_H
#define WEIL_LAB_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `WL_STATUS_OK` is zero.
 */
typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_SIZE_MISMATCH = 1,
  WL_STATUS_INVALID_GENERATOR = 2,
  WL_STATUS_PARSE = 3,
  WL_STATUS_VALIDATION = 4,
  WL_STATUS_PRECONDITION = 5,
  WL_STATUS_INPUT = 6,
  WL_STATUS_RESOURCE_LIMIT = 7,
  WL_STATUS_NUMERICAL = 8,
  WL_STATUS_IO = 9,
  WL_STATUS_NULL_POINTER = 10,
  WL_STATUS_INVALID_UTF8 = 11,
  WL_STATUS_PANIC = 12,
} WlStatus;

/**
 * A weighted permutation representation.
 */
typedef struct WlWpr WlWpr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Valid until the next call
 * into the library on the same thread.
 */
const char *wl_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *wl_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void wl_string_free(char *s);

/**
 * Builds `ρ = (w, G)` from a slope list (`"0,0,1/2,1/2,1,1"`) and generators
 * of `G/⟨ι⟩` in cycle notation; `ι` is adjoined.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum WlStatus wl_wpr_new(const char *slopes, const char *generators, struct WlWpr **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `h` must come from [`wl_wpr_new`] and not have been freed.
 */
void wl_wpr_free(struct WlWpr *h);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_wpr_g(const struct WlWpr *h, size_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_wpr_group_order(const struct WlWpr *h, size_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_wpr_angle_rank(const struct WlWpr *h, size_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_wpr_is_geometrically_simple(const struct WlWpr *h, bool *out);

/**
 * Fails with `WL_STATUS_PRECONDITION` unless the representation is
 * geometrically simple.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_wpr_is_exceptional(const struct WlWpr *h, bool *out);

/**
 * JSON with the exceptional witnesses.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable. Free the result with
 * [`wl_string_free`].
 */
enum WlStatus wl_wpr_witnesses_json(const struct WlWpr *h, char **out);

/**
 * Analyzer report for an LMFDB label, as JSON. `precision_bits = 0` selects
 * the default.
 *
 * # Safety
 * `label` must be NUL-terminated; `out` must be writable. Free the result
 * with [`wl_string_free`].
 */
enum WlStatus wl_analyze_label(const char *label, size_t precision_bits, char **out);

/**
 * Analyzer report for a Frobenius polynomial given either as `a_1..a_g`
 * or as the full descending list `1, a_1, …, a_2g`.
 *
 * # Safety
 * `coefficients` must point to `len` integers; `out` must be writable.
 */
enum WlStatus wl_analyze_coefficients(const int64_t *coefficients,
                                      size_t len,
                                      uint64_t p,
                                      uint64_t q,
                                      size_t precision_bits,
                                      char **out);

/**
 * Classification table for one Newton polygon as JSON. `preset` is
 * `"appendix"`, `"all"` or `"exceptional-only"` (NULL means appendix).
 *
 * # Safety
 * String arguments must be NUL-terminated or NULL where allowed; `out`
 * must be writable.
 */
enum WlStatus wl_classify_json(const char *slopes, const char *preset, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEIL_LAB_H */
