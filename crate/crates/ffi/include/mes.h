#ifndef MES_H
#define MES_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum MesStatus {
  MES_STATUS_OK = 0,
  MES_STATUS_NULL_POINTER = 1,
  MES_STATUS_INVALID_ARGUMENT = 2,
  MES_STATUS_BUDGET = 3,
  MES_STATUS_TOLERANCE = 4,
  MES_STATUS_UNSUPPORTED = 5,
  MES_STATUS_NOT_STABILIZED = 6,
  MES_STATUS_OUT_OF_RANGE = 7,
  MES_STATUS_PANIC = 8,
} MesStatus;

/**
 * A composition `(n_1, ..., n_r)`.
 */
typedef struct MesComposition MesComposition;

/**
 * A sum of zeta symbols times rational q-series.
 */
typedef struct MesMzvSeries MesMzvSeries;

/**
 * A truncated q-series with rational coefficients.
 */
typedef struct MesSeries MesSeries;

/**
 * A linear combination of tensors `left ⊗ right`.
 */
typedef struct MesTensor MesTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *mes_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mes_string_free(char *s);

/**
 * # Safety
 * `parts` must point to `len` readable values; `out` must be writable.
 */
enum MesStatus mes_composition_new(const uint32_t *parts, size_t len, struct MesComposition **out);

/**
 * Parses `"2,3"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MesStatus mes_composition_parse(const char *text, struct MesComposition **out);

/**
 * # Safety
 * `c` must be a live handle or null.
 */
size_t mes_composition_depth(const struct MesComposition *c);

/**
 * # Safety
 * `c` must come from this library and not be freed twice.
 */
void mes_composition_free(struct MesComposition *c);

/**
 * Goncharov coproduct of `I(c)`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_coproduct(const struct MesComposition *c, struct MesTensor **out);

/**
 * Number of terms.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t mes_tensor_len(const struct MesTensor *t);

/**
 * JSON rendering of the tensor (exact rationals as string pairs).
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_tensor_to_json(const struct MesTensor *t, char **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void mes_tensor_free(struct MesTensor *t);

/**
 * `g̃_c` through `q^order`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_g_tilde(const struct MesComposition *c, size_t order, struct MesSeries **out);

/**
 * `g̃^sh_c` through `q^order`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_g_tilde_sh(const struct MesComposition *c, size_t order, struct MesSeries **out);

/**
 * # Safety
 * `s` must be a live handle or null.
 */
size_t mes_series_order(const struct MesSeries *s);

/**
 * Coefficient of `q^n` as decimal numerator and denominator strings.
 *
 * # Safety
 * `s` must be a live handle; `num` and `den` must be writable.
 */
enum MesStatus mes_series_coeff(const struct MesSeries *s, size_t n, char **num, char **den);

/**
 * Coefficient of `q^n` rounded to a double.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_series_coeff_f64(const struct MesSeries *s, size_t n, double *out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mes_series_free(struct MesSeries *s);

/**
 * `G̃^sh_c` through `q^order`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_mes_sh(const struct MesComposition *c, size_t order, struct MesMzvSeries **out);

/**
 * Number of distinct zeta symbols.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t mes_mzv_series_len(const struct MesMzvSeries *t);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum MesStatus mes_mzv_series_to_json(const struct MesMzvSeries *t, char **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void mes_mzv_series_free(struct MesMzvSeries *t);

/**
 * `ζ(c)` for admissible `c` with its absolute error bound.
 *
 * # Safety
 * `c` must be a live handle; `value` and `error_bound` must be writable.
 */
enum MesStatus mes_mzv_eval(const struct MesComposition *c,
                            double tol,
                            double *value,
                            double *error_bound);

/**
 * Normalized truncated lattice sum `G_c(τ) / (-2πi)^{wt}`.
 *
 * # Safety
 * `c` must be a live handle; `re` and `im` must be writable.
 */
enum MesStatus mes_lattice_eval(const struct MesComposition *c,
                                double tau_re,
                                double tau_im,
                                size_t l_cutoff,
                                size_t m_cutoff,
                                double *re,
                                double *im);

/**
 * Number of independent double shuffle relations of the given weight.
 *
 * # Safety
 * `out` must be writable.
 */
enum MesStatus mes_relation_count(uint32_t weight, size_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MES_H */
