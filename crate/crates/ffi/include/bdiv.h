#ifndef BDIV_H
#define BDIV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BdivStatus {
  BDIV_STATUS_OK = 0,
  BDIV_STATUS_OTHER = 1,
  BDIV_STATUS_VALIDATION = 2,
  BDIV_STATUS_BUDGET = 3,
  BDIV_STATUS_REDUCTION_REFUSED = 4,
  BDIV_STATUS_NOT_PSEUDOEFFECTIVE = 5,
  BDIV_STATUS_INCONSISTENT = 6,
  BDIV_STATUS_OUT_OF_RANGE = 7,
  /**
   * A required pointer argument was null or a string was not UTF-8.
   */
  BDIV_STATUS_INVALID_ARGUMENT = 8,
  /**
   * The value is exact in `text` but does not fit the `i64` pair.
   */
  BDIV_STATUS_OVERFLOW = 9,
  BDIV_STATUS_PANIC = 10,
} BdivStatus;

/**
 * Volume convention selector for `bdiv_appendix_volume`.
 */
typedef enum BdivNormalization {
  /**
   * `lim h0(lD) / (l^2 / 2)`.
   */
  BDIV_NORMALIZATION_WITH_FACTORIAL = 0,
  /**
   * `lim h0(lD) / l^2`.
   */
  BDIV_NORMALIZATION_WITHOUT_FACTORIAL = 1,
} BdivNormalization;

/**
 * Opaque tower handle.
 */
typedef struct BdivTower BdivTower;

/**
 * `num / den` with `den > 0`.
 */
typedef struct BdivRational {
  int64_t num;
  int64_t den;
} BdivRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next failing call on this thread.
 */
const char *bdiv_last_error(void);

/**
 * Releases a string returned through a `text` out-parameter.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library.
 */
void bdiv_string_free(char *s);

/**
 * A tower with the projective plane as its only model.
 */
struct BdivTower *bdiv_tower_new_p2(void);

/**
 * # Safety
 * `t` must be null or a handle from `bdiv_tower_new_p2` not yet freed.
 */
void bdiv_tower_free(struct BdivTower *t);

/**
 * # Safety
 * `t` must be a live handle.
 */
size_t bdiv_tower_model_count(const struct BdivTower *t);

/**
 * Registers a base curve of degree `degree` (class `degree * H`).
 *
 * # Safety
 * `t` must be a live handle and `name` a NUL-terminated string.
 */
enum BdivStatus bdiv_tower_register_curve(struct BdivTower *t, const char *name, int64_t degree);

/**
 * Blows up the point of `model` where the `n` named curves meet. The new
 * exceptional curve is called `exceptional` (or `E<index>` when null) and
 * the new model id is written to `out_model`.
 *
 * # Safety
 * `t` must be a live handle, `curves` must point to `n` NUL-terminated
 * strings and `out_model` must be writable.
 */
enum BdivStatus bdiv_tower_blow_up(struct BdivTower *t,
                                   size_t model,
                                   const char *const *curves,
                                   size_t n,
                                   const char *exceptional,
                                   size_t *out_model);

/**
 * Intersection number of the strict transforms of two curves on `model`.
 *
 * # Safety
 * `t` must be a live handle, `a` and `b` NUL-terminated strings, `out`
 * writable, and `text` null or writable.
 */
enum BdivStatus bdiv_tower_intersect_curves(const struct BdivTower *t,
                                            const char *a,
                                            const char *b,
                                            size_t model,
                                            struct BdivRational *out,
                                            char **text);

/**
 * `(D'_k)^2` on the Step-2 tower with `k` rounds, computed on the tower.
 *
 * # Safety
 * `out` must be writable and `text` null or writable.
 */
enum BdivStatus bdiv_appendix_degree(size_t k, struct BdivRational *out, char **text);

/**
 * Volume of the limit b-divisor of the Step-2 tower (line reduction
 * checked on `k` rounds, `k >= 1`).
 *
 * # Safety
 * `out` must be writable and `text` null or writable.
 */
enum BdivStatus bdiv_appendix_volume(size_t k,
                                     enum BdivNormalization normalization,
                                     struct BdivRational *out,
                                     char **text);

/**
 * Hilbert-Samuel check for `c log |I|` on `O(dH)`: writes the exact target
 * `(dH - c D_I)^2` and `s_{k_max}`. `gens` holds `n` exponent pairs.
 *
 * # Safety
 * `gens` must point to `2 n` values; `target` and `s_last` must be writable.
 */
enum BdivStatus bdiv_toric_hs(uint64_t d,
                              struct BdivRational c,
                              const uint64_t *gens,
                              size_t n,
                              uint64_t k_max,
                              struct BdivRational *target,
                              struct BdivRational *s_last);

/**
 * Chern-Weil check: the b-divisor degree and the toric degree, equal on success.
 *
 * # Safety
 * `gens` must point to `2 n` values; `bdeg` and `eqalg` must be writable.
 */
enum BdivStatus bdiv_toric_cw(uint64_t d,
                              struct BdivRational c,
                              const uint64_t *gens,
                              size_t n,
                              uint64_t k_max,
                              struct BdivRational *bdeg,
                              struct BdivRational *eqalg);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BDIV_H */
