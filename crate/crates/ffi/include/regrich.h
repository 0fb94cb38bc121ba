/* Generated by cbindgen. Do not edit. */

#ifndef REGRICH_H
#define REGRICH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RegrichStatus {
  REGRICH_STATUS_OK = 0,
  REGRICH_STATUS_NULL_POINTER = 1,
  REGRICH_STATUS_INVALID_ARGUMENT = 2,
  REGRICH_STATUS_SINGULAR = 3,
  REGRICH_STATUS_CONSTRUCTION = 4,
  REGRICH_STATUS_UNSUPPORTED = 5,
  REGRICH_STATUS_IO = 6,
  REGRICH_STATUS_PANIC = 7,
} RegrichStatus;

typedef enum RegrichVerdict {
  REGRICH_VERDICT_RICH = 0,
  REGRICH_VERDICT_POOR = 1,
  REGRICH_VERDICT_INCONCLUSIVE = 2,
} RegrichVerdict;

/**
 * Tolerances and seed.
 */
typedef struct RegrichConfig RegrichConfig;

/**
 * `(A, B₁, …, B_m)`.
 */
typedef struct RegrichDatum RegrichDatum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. Valid until the next call.
 */
const char *regrich_last_error(void);

const char *regrich_version(void);

struct RegrichConfig *regrich_config_new(void);

/**
 * # Safety
 * `c` is null or came from [`regrich_config_new`] and was not freed.
 */
void regrich_config_free(struct RegrichConfig *c);

/**
 * # Safety
 * `c` came from [`regrich_config_new`].
 */
enum RegrichStatus regrich_config_set_seed(struct RegrichConfig *c, uint64_t seed);

/**
 * Relative rank tolerance and absolute zero tolerance; both positive.
 *
 * # Safety
 * `c` came from [`regrich_config_new`].
 */
enum RegrichStatus regrich_config_set_tolerances(struct RegrichConfig *c,
                                                 double rank_tol_rel,
                                                 double zero_tol_abs);

/**
 * `a` holds `2·d·d` doubles, `b` holds `2·m·d·d` (may be null when `m = 0`).
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `cfg` may be null.
 */
enum RegrichStatus regrich_datum_new(size_t d,
                                     size_t m,
                                     const double *a,
                                     const double *b,
                                     const struct RegrichConfig *cfg,
                                     struct RegrichDatum **result);

/**
 * # Safety
 * `p` is null or came from [`regrich_datum_new`] and was not freed.
 */
void regrich_datum_free(struct RegrichDatum *p);

/**
 * Richness verdict and its margin.
 *
 * # Safety
 * `datum` came from [`regrich_datum_new`]; out pointers are valid; `cfg` may be null.
 */
enum RegrichStatus regrich_is_rich(const struct RegrichDatum *datum,
                                   const struct RegrichConfig *cfg,
                                   enum RegrichVerdict *verdict,
                                   double *margin);

/**
 * `dim Λ`.
 *
 * # Safety
 * As [`regrich_is_rich`].
 */
enum RegrichStatus regrich_lambda_dim(const struct RegrichDatum *datum,
                                      const struct RegrichConfig *cfg,
                                      size_t *dim);

/**
 * `dim(Λ_N · A^N x0) − 1`; `x0` holds `2·d` doubles.
 *
 * # Safety
 * As [`regrich_is_rich`]; `x0` is valid for `2·d` doubles.
 */
enum RegrichStatus regrich_regularity_rank(const struct RegrichDatum *datum,
                                           const double *x0,
                                           size_t n,
                                           const struct RegrichConfig *cfg,
                                           size_t *rank);

/**
 * Class count `c`, acyclicity, and the upper bound on `rig₊ Ad_A`.
 *
 * # Safety
 * `a` is valid for `2·d·d` doubles; out pointers are valid; `cfg` may be null.
 */
enum RegrichStatus regrich_rigidity_bound(size_t d,
                                          const double *a,
                                          const struct RegrichConfig *cfg,
                                          size_t *classes,
                                          size_t *acyc,
                                          size_t *bound);

/**
 * Whether `λ ⌣ μ ≠ 0` in `k × (n−k)`; `l` and `m` hold `k` row lengths each.
 *
 * # Safety
 * `l`, `m` valid for `k` values; `nonzero` valid.
 */
enum RegrichStatus regrich_cup_nonzero(size_t k,
                                       size_t n,
                                       const size_t *l,
                                       const size_t *m,
                                       bool *nonzero);

/**
 * Scan a system given as JSON text; `grid` holds one count or one per parameter.
 * The report JSON is returned in `report`, to be released with [`regrich_string_free`].
 *
 * # Safety
 * `system_json` is a NUL-terminated string; `grid` valid for `grid_len` values.
 */
enum RegrichStatus regrich_scan_json(const char *system_json,
                                     const size_t *grid,
                                     size_t grid_len,
                                     const struct RegrichConfig *cfg,
                                     char **report);

/**
 * # Safety
 * `s` is null or was returned by this library and not freed.
 */
void regrich_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGRICH_H */
