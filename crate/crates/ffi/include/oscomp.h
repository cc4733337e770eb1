#ifndef OSCOMP_H
#define OSCOMP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum OscompStatus {
  OSCOMP_STATUS_OK = 0,
  OSCOMP_STATUS_NULL_POINTER = 1,
  OSCOMP_STATUS_INVALID_UTF8 = 2,
  OSCOMP_STATUS_PARSE = 3,
  OSCOMP_STATUS_INVALID_INPUT = 4,
  OSCOMP_STATUS_OUT_OF_BOUND = 5,
  OSCOMP_STATUS_PRECONDITION_VIOLATED = 6,
  OSCOMP_STATUS_UNKNOWN_AT_BOUND = 7,
  OSCOMP_STATUS_OVERFLOW = 8,
  OSCOMP_STATUS_PANIC = 9,
} OscompStatus;

typedef enum OscompFrobeniusKind {
  /**
   * `value` is the largest gap.
   */
  OSCOMP_FROBENIUS_KIND_NUMBER = 0,
  /**
   * Infinitely many gaps; `value` is the gcd of the generators.
   */
  OSCOMP_FROBENIUS_KIND_INFINITE_GAPS = 1,
  /**
   * No gaps; `value` is 0.
   */
  OSCOMP_FROBENIUS_KIND_NO_GAPS = 2,
} OscompFrobeniusKind;

/**
 * Opaque model handle.
 */
typedef struct OscompModel OscompModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *oscomp_last_error(void);

/**
 * Parse a model from its JSON description.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out_model` a valid pointer.
 */
enum OscompStatus oscomp_model_from_json(const char *json, struct OscompModel **out_model);

/**
 * # Safety
 * `model` must come from `oscomp_model_from_json` and not be freed twice.
 */
void oscomp_model_free(struct OscompModel *model);

/**
 * # Safety
 * Pointers must be valid; `element` nul-terminated.
 */
enum OscompStatus oscomp_member(const struct OscompModel *model_ptr,
                                const char *element_json,
                                bool *out_member);

/**
 * Frobenius number of a numerical model.
 *
 * # Safety
 * Pointers must be valid.
 */
enum OscompStatus oscomp_frobenius(const struct OscompModel *model_ptr,
                                   enum OscompFrobeniusKind *out_kind,
                                   uint64_t *out_value);

/**
 * `x <= y` in the model's order.
 *
 * # Safety
 * Pointers must be valid; element strings nul-terminated.
 */
enum OscompStatus oscomp_leq(const struct OscompModel *model_ptr,
                             const char *x_json,
                             const char *y_json,
                             bool *out_leq);

/**
 * Least `k <= k_max` with `(k+1)x <= ky`. `out_found` is false when none
 * exists within `k_max`.
 *
 * # Safety
 * Pointers must be valid; element strings nul-terminated.
 */
enum OscompStatus oscomp_stably_dominated(const struct OscompModel *model_ptr,
                                          const char *x_json,
                                          const char *y_json,
                                          uint64_t k_max,
                                          bool *out_found,
                                          uint64_t *out_k);

/**
 * Bounded n-comparison verdict as JSON. Free the string with
 * `oscomp_string_free`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum OscompStatus oscomp_n_comparison_json(const struct OscompModel *model_ptr,
                                           uint64_t n,
                                           uint64_t bound,
                                           bool weak,
                                           char **out_json);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void oscomp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCOMP_H */
