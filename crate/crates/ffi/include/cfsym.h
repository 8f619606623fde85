#ifndef CFSYM_H
#define CFSYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  CFSYM_STATUS_OK = 0,
  CFSYM_STATUS_NULL_POINTER = 1,
  CFSYM_STATUS_INVALID_UTF8 = 2,
  CFSYM_STATUS_INVALID_ARGUMENT = 3,
  CFSYM_STATUS_NOT_STABLE = 4,
  CFSYM_STATUS_SIZE_LIMIT = 5,
  CFSYM_STATUS_OVERFLOW = 6,
  CFSYM_STATUS_VERIFICATION_FAILED = 7,
  CFSYM_STATUS_IO = 8,
  CFSYM_STATUS_PANIC = 9,
} cfsym_status;

/**
 * Rows of a completed census run.
 */
typedef struct cfsym_census cfsym_census;

/**
 * An immutable string of positive continued-fraction digits.
 */
typedef struct cfsym_digits cfsym_digits;

/**
 * One census row. `total` saturates at `UINT64_MAX`.
 */
typedef struct {
  uint32_t n;
  uint64_t big_n;
  uint64_t total;
  uint64_t f;
  double delta;
} cfsym_census_row_t;

typedef struct {
  uint64_t hits;
  uint64_t windows;
  double frequency;
  double expected;
} cfsym_montecarlo_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *cfsym_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *cfsym_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cfsym_string_free(char *s);

/**
 * Parses comma-separated digits such as `"3,1,4"`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
cfsym_status cfsym_digits_parse(const char *text, cfsym_digits **out);

/**
 * Builds a digit string from `len` machine words.
 *
 * # Safety
 * `digits` must point to `len` readable values; `out` must be writable.
 */
cfsym_status cfsym_digits_new(const uint64_t *digits, size_t len, cfsym_digits **out);

/**
 * # Safety
 * `d` must come from this library and not be freed twice. Null is ignored.
 */
void cfsym_digits_free(cfsym_digits *d);

/**
 * Number of digits, or 0 for null.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t cfsym_digits_len(const cfsym_digits *d);

/**
 * Text form `(a1,...,an)`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_digits_to_string(const cfsym_digits *d, char **out);

/**
 * Exact value `p/q` as text.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_eval(const cfsym_digits *d, char **out);

/**
 * Characteristic number in decimal.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_chi(const cfsym_digits *d, char **out);

/**
 * Characteristic number as a machine word; `Overflow` when it does not fit.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_chi_u64(const cfsym_digits *d, uint64_t *out);

/**
 * Frequency rounded to `precision_bits` significand bits (1..=53).
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_pgk(const cfsym_digits *d, uint32_t precision_bits, double *out);

/**
 * Exact frequency as `log2(num/den)`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_pgk_exact(const cfsym_digits *d, char **out);

/**
 * Whether two strings have the same Gauss-Kuzmin frequency.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
cfsym_status cfsym_measure_equal(const cfsym_digits *a, const cfsym_digits *b, bool *out);

/**
 * Number of nontrivial symmetries (distinct permutations other than the
 * string and its reversal with the same frequency).
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_symmetry_count(const cfsym_digits *d, size_t max_len, size_t *out);

/**
 * `a+` and its symmetry for a stable string; `NotStable` otherwise.
 *
 * # Safety
 * `d` must be a live handle; `plus` and `sigma` must be writable.
 */
cfsym_status cfsym_a_plus(const cfsym_digits *d, cfsym_digits **plus, cfsym_digits **sigma);

/**
 * Census of exceptional `n`-subsets of `{1..n_max}` at the given report
 * points (all multiples of 10 or 5 plus `n_max` when `points` is null).
 * `workers = 0` uses every core.
 *
 * # Safety
 * `points` must be null or point to `npoints` values; `out` must be writable.
 */
cfsym_status cfsym_census_run(uint32_t n,
                              uint64_t n_max,
                              const uint64_t *points,
                              size_t npoints,
                              size_t workers,
                              bool force,
                              cfsym_census **out);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
size_t cfsym_census_len(const cfsym_census *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_census_row(const cfsym_census *c, size_t index, cfsym_census_row_t *out);

/**
 * # Safety
 * `c` must come from this library and not be freed twice. Null is ignored.
 */
void cfsym_census_free(cfsym_census *c);

/**
 * Seeded Monte Carlo frequency of `target`. `workers = 0` uses every core;
 * the counts do not depend on it.
 *
 * # Safety
 * `target` must be a live handle; `out` must be writable.
 */
cfsym_status cfsym_montecarlo(const cfsym_digits *target,
                              uint64_t samples,
                              size_t digits_per_sample,
                              uint64_t seed,
                              size_t workers,
                              cfsym_montecarlo_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CFSYM_H */
