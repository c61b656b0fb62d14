#ifndef SPMUL_H
#define SPMUL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SpmulStatus {
  Ok = 0,
  NullPointer = 1,
  InvalidArgument = 2,
  Parse = 3,
  /**
   * A randomized stage failed; retrying with another seed may succeed.
   */
  Fail = 4,
  Internal = 5,
} SpmulStatus;

/**
 * Opaque sparse polynomial.
 */
typedef struct SpmulPoly SpmulPoly;

/**
 * Opaque sorted set of integers.
 */
typedef struct SpmulSet SpmulSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *spmul_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void spmul_string_free(char *s);

/**
 * Parses a polynomial in `sp 1 <nvars>` text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SpmulStatus spmul_poly_parse(const char *text_in, struct SpmulPoly **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum SpmulStatus spmul_poly_to_string(const struct SpmulPoly *p, char **out);

/**
 * Number of terms, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uintptr_t spmul_poly_terms(const struct SpmulPoly *p);

/**
 * # Safety
 * `p` must be null or a handle from this library, freed at most once.
 */
void spmul_poly_free(struct SpmulPoly *p);

/**
 * Product over the integers, correct with probability at least `1 - mu`.
 *
 * # Safety
 * `f`, `g` must be live handles; `out` must be writable.
 */
enum SpmulStatus spmul_mul(const struct SpmulPoly *f,
                           const struct SpmulPoly *g,
                           double mu,
                           uint64_t seed,
                           struct SpmulPoly **out);

/**
 * Product modulo the decimal integer `modulus`, coefficients centered.
 *
 * # Safety
 * `f`, `g` must be live handles, `modulus` a NUL-terminated string and
 * `out` writable.
 */
enum SpmulStatus spmul_mul_mod(const struct SpmulPoly *f,
                               const struct SpmulPoly *g,
                               const char *modulus,
                               double mu,
                               uint64_t seed,
                               struct SpmulPoly **out);

/**
 * Product by the quadratic reference algorithm.
 *
 * # Safety
 * `f`, `g` must be live handles; `out` must be writable.
 */
enum SpmulStatus spmul_naive_mul(const struct SpmulPoly *f,
                                 const struct SpmulPoly *g,
                                 struct SpmulPoly **out);

/**
 * Parses a set, one decimal integer per line.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SpmulStatus spmul_set_parse(const char *text_in, struct SpmulSet **out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SpmulStatus spmul_set_to_string(const struct SpmulSet *s, char **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
uintptr_t spmul_set_len(const struct SpmulSet *s);

/**
 * # Safety
 * `s` must be null or a handle from this library, freed at most once.
 */
void spmul_set_free(struct SpmulSet *s);

/**
 * `{a + b}`, correct with probability at least `1 - mu`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SpmulStatus spmul_sumset(const struct SpmulSet *a,
                              const struct SpmulSet *b,
                              double mu,
                              uint64_t seed,
                              struct SpmulSet **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPMUL_H */
