/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef BRIDGE_RECT_H
#define BRIDGE_RECT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BrStatus {
  BR_STATUS_OK = 0,
  BR_STATUS_NULL_POINTER = 1,
  BR_STATUS_INVALID_UTF8 = 2,
  BR_STATUS_PARSE_ERROR = 3,
  BR_STATUS_INVALID_SYSTEM = 4,
  BR_STATUS_UNKNOWN_BUILTIN = 5,
  BR_STATUS_ISOTOPIC_INPUT = 6,
  BR_STATUS_PANIC = 7,
} BrStatus;

/**
 * Opaque handle to a validated arc system.
 */
typedef struct BrSystem BrSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last error on this thread, or NULL. Valid until the next
 * call into this library on the same thread.
 */
const char *br_last_error_message(void);

/**
 * Parses and validates a system in the text format.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum BrStatus br_system_parse(const char *text, struct BrSystem **out);

/**
 * Loads a built-in fixture (`@epsilon`, `@delta85`, `@rc-positive-A`,
 * `@rc-positive-B`; the `@` is optional).
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
enum BrStatus br_system_builtin(const char *name, struct BrSystem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void br_system_free(struct BrSystem *sys);

/**
 * Serializes a system; free the result with `br_string_free`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum BrStatus br_system_to_text(const struct BrSystem *sys, char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void br_string_free(char *s);

/**
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum BrStatus br_are_isotopic(const struct BrSystem *a, const struct BrSystem *b, bool *out);

/**
 * Minimal intersection numbers, row-major: `out[3*i+j] = |a_(i+1) ∩ b_(j+1)|`.
 *
 * # Safety
 * Handles must be live; `out` must hold 9 values.
 */
enum BrStatus br_intersection_matrix(const struct BrSystem *a,
                                     const struct BrSystem *b,
                                     uint32_t *out);

/**
 * Rectangle condition. `realized_mask` gets bit `3*i+j` for each realized
 * tuple, with `i` and `j` indexing the pairs {1,2}, {1,3}, {2,3} of `a` and
 * `b`. Isotopic inputs return `BR_STATUS_ISOTOPIC_INPUT`.
 *
 * # Safety
 * Handles must be live; outputs must be writable.
 */
enum BrStatus br_rectangle_condition(const struct BrSystem *a,
                                     const struct BrSystem *b,
                                     bool *holds,
                                     uint32_t *realized_mask);

/**
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum BrStatus br_normal_form(const struct BrSystem *a, const struct BrSystem *b, bool *out);

/**
 * Number of waves of `target` with respect to `reference`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum BrStatus br_wave_count(const struct BrSystem *reference,
                            const struct BrSystem *target,
                            size_t *out);

/**
 * Certificate that `b` has no rectangle-condition partner carrying `gamma`:
 * on success `*found` tells whether one exists, and if so arc
 * `*witness_arc` (1-based) of `gamma` misses the pair `{*pair_i, *pair_j}`
 * of `b`. A `gamma` arc isotopic to an arc of `b` returns
 * `BR_STATUS_ISOTOPIC_INPUT`.
 *
 * # Safety
 * Handles must be live; outputs must be writable.
 */
enum BrStatus br_certify(const struct BrSystem *gamma,
                         const struct BrSystem *b,
                         bool *found,
                         uint32_t *witness_arc,
                         uint32_t *pair_i,
                         uint32_t *pair_j);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRIDGE_RECT_H */
