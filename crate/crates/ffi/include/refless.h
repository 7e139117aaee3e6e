#ifndef REFLESS_H
#define REFLESS_H

/* This file is generated by cbindgen from the refless-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of every fallible call. Zero is success; any other value leaves a
 * message readable via `refless_last_error_message` on the same thread.
 */
typedef enum refless_status {
  REFLESS_STATUS_OK = 0,
  REFLESS_STATUS_NULL_POINTER = 1,
  REFLESS_STATUS_INVALID_UTF8 = 2,
  REFLESS_STATUS_NON_ASCENDING_SPECTRUM = 3,
  REFLESS_STATUS_NON_POSITIVE_KAPPA = 4,
  REFLESS_STATUS_DEGENERATE_GAP = 5,
  REFLESS_STATUS_LENGTH_MISMATCH = 6,
  REFLESS_STATUS_OVERFLOW_SHIFT = 7,
  REFLESS_STATUS_OVERFLOW_RANGE = 8,
  REFLESS_STATUS_SIZE_LIMIT = 9,
  REFLESS_STATUS_NOT_SQUARE = 10,
  REFLESS_STATUS_INDEX_OUT_OF_RANGE = 11,
  REFLESS_STATUS_EMPTY_GRID = 12,
  REFLESS_STATUS_NON_UNIFORM_GRID = 13,
  REFLESS_STATUS_STATE_COUNT_MISMATCH = 14,
  REFLESS_STATUS_INSUFFICIENT_DECAY = 15,
  REFLESS_STATUS_NO_BOUND_STATES = 16,
  REFLESS_STATUS_ROOT_BRACKET_FAILURE = 17,
  REFLESS_STATUS_NON_POSITIVE = 18,
  REFLESS_STATUS_UNKNOWN_PRESET = 19,
  REFLESS_STATUS_INVALID_INPUT = 20,
} refless_status;

/**
 * The cosh-term expansion of the spectral determinant. Self-contained once
 * built; the spectrum handle it came from may be freed independently.
 */
typedef struct refless_expansion refless_expansion;

/**
 * A validated spectrum: ascending decay rates, one shift per state, and the
 * physical constant relating rates to energies.
 */
typedef struct refless_spectrum refless_spectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a spectrum from `len` ascending decay rates with the norming that
 * makes the reconstructed potential an even function of `x`. On success
 * writes a handle to `*out`; the caller owns it and must release it with
 * `refless_spectrum_free`. On failure `*out` is null.
 *
 * # Safety
 * `kappas` must point to `len` readable doubles (or be null when `len` is 0)
 * and `out` to a writable pointer slot.
 */
enum refless_status refless_spectrum_new_symmetric(const double *kappas,
                                                   size_t len,
                                                   double c_phys,
                                                   struct refless_spectrum **out);

/**
 * Creates a spectrum from `len` decay rates and `len` spatial shifts, one per
 * state. Ownership and failure behavior as in `refless_spectrum_new_symmetric`.
 *
 * # Safety
 * `kappas` and `shifts` must each point to `len` readable doubles (or be
 * null when `len` is 0) and `out` to a writable pointer slot.
 */
enum refless_status refless_spectrum_new_with_shifts(const double *kappas,
                                                     const double *shifts,
                                                     size_t len,
                                                     double c_phys,
                                                     struct refless_spectrum **out);

/**
 * Creates a spectrum from `len` decay rates and `len` positive norming
 * constants, one per state. Ownership and failure behavior as in
 * `refless_spectrum_new_symmetric`.
 *
 * # Safety
 * `kappas` and `constants` must each point to `len` readable doubles (or be
 * null when `len` is 0) and `out` to a writable pointer slot.
 */
enum refless_status refless_spectrum_new_with_constants(const double *kappas,
                                                        const double *constants,
                                                        size_t len,
                                                        double c_phys,
                                                        struct refless_spectrum **out);

/**
 * Creates a spectrum from a preset name: `pt:N` (integer rates `1..N`),
 * `well:R` (finite square well of dimensionless radius `R`), or `morse:W`
 * (Morse well depth parameter `W`). Ownership and failure behavior as in
 * `refless_spectrum_new_symmetric`.
 *
 * # Safety
 * `name` must be a readable NUL-terminated string and `out` a writable
 * pointer slot.
 */
enum refless_status refless_spectrum_preset(const char *name,
                                            double c_phys,
                                            struct refless_spectrum **out);

/**
 * Creates a spectrum from the JSON document format
 * `{"kappas":[...], "norming":{"mode":..., "values":[...]}, "c_phys":...}`.
 * Ownership and failure behavior as in `refless_spectrum_new_symmetric`.
 *
 * # Safety
 * `text` must be a readable NUL-terminated string and `out` a writable
 * pointer slot.
 */
enum refless_status refless_spectrum_from_json(const char *text, struct refless_spectrum **out);

/**
 * Number of bound states, or 0 for a null handle.
 *
 * # Safety
 * `s` must be a live spectrum handle or null.
 */
size_t refless_spectrum_len(const struct refless_spectrum *s);

/**
 * The physical constant the spectrum was built with, or NaN for a null handle.
 *
 * # Safety
 * `s` must be a live spectrum handle or null.
 */
double refless_spectrum_c_phys(const struct refless_spectrum *s);

/**
 * Copies the ascending decay rates into `out`.
 *
 * # Safety
 * `s` must be a live spectrum handle or null; `out` must hold
 * `refless_spectrum_len(s)` writable doubles.
 */
enum refless_status refless_spectrum_kappas(const struct refless_spectrum *s, double *out);

/**
 * Copies the per-state spatial shifts into `out`.
 *
 * # Safety
 * `s` must be a live spectrum handle or null; `out` must hold
 * `refless_spectrum_len(s)` writable doubles.
 */
enum refless_status refless_spectrum_shifts(const struct refless_spectrum *s, double *out);

/**
 * Copies the bound-state energies `-c_phys * kappa_n^2` into `out`, most
 * negative first (the reverse of the rate order).
 *
 * # Safety
 * `s` must be a live spectrum handle or null; `out` must hold
 * `refless_spectrum_len(s)` writable doubles.
 */
enum refless_status refless_spectrum_energies(const struct refless_spectrum *s, double *out);

/**
 * Releases a spectrum handle; null is ignored.
 *
 * # Safety
 * `s` must have come from one of the spectrum constructors and must not be
 * used after this call.
 */
void refless_spectrum_free(struct refless_spectrum *s);

/**
 * Builds the cosh-term expansion for a spectrum. On success writes a handle
 * to `*out`; the caller owns it and must release it with
 * `refless_expansion_free`. On failure `*out` is null.
 *
 * # Safety
 * `s` must be a live spectrum handle or null and `out` a writable pointer
 * slot.
 */
enum refless_status refless_expansion_build(const struct refless_spectrum *s,
                                            struct refless_expansion **out);

/**
 * Number of cosh terms (`2^(N-1)` for `N` states), or 0 for a null handle.
 *
 * # Safety
 * `e` must be a live expansion handle or null.
 */
size_t refless_expansion_term_count(const struct refless_expansion *e);

/**
 * Releases an expansion handle; null is ignored.
 *
 * # Safety
 * `e` must have come from `refless_expansion_build` and must not be used
 * after this call.
 */
void refless_expansion_free(struct refless_expansion *e);

/**
 * Evaluates the reconstructed potential at `x`. Finite for every `x`; the
 * evaluator works in the log domain, so the determinant overflowing is not a
 * concern.
 *
 * # Safety
 * `e` must be a live expansion handle or null; `out` must be a writable
 * double slot.
 */
enum refless_status refless_potential_eval(const struct refless_expansion *e,
                                           double x,
                                           double *out);

/**
 * Evaluates the reconstructed potential at `len` arbitrary points. The points
 * need not be ordered or evenly spaced.
 *
 * # Safety
 * `e` must be a live expansion handle or null; `xs` must point to `len`
 * readable doubles (or be null when `len` is 0) and `out` to `len` writable
 * doubles.
 */
enum refless_status refless_potential_sample(const struct refless_expansion *e,
                                             const double *xs,
                                             size_t len,
                                             double *out);

/**
 * Evaluates the normalized bound-state wavefunction for the 1-based state
 * index `n` at `x`. State `n` decays like `exp(-kappa_n x)` and has `N - n`
 * nodes.
 *
 * # Safety
 * `s` must be a live spectrum handle or null; `out` must be a writable
 * double slot.
 */
enum refless_status refless_psi_eval(const struct refless_spectrum *s,
                                     size_t n,
                                     double x,
                                     double *out);

/**
 * Evaluates all bound-state wavefunctions at `x` in one solve, writing state
 * 1 first.
 *
 * # Safety
 * `s` must be a live spectrum handle or null; `out` must hold
 * `refless_spectrum_len(s)` writable doubles.
 */
enum refless_status refless_psi_eval_all(const struct refless_spectrum *s, double x, double *out);

/**
 * Message for the most recent failure on the calling thread, or null when
 * the last call succeeded. The pointer stays valid until the next call into
 * the library from this thread; copy the string to keep it longer.
 */
const char *refless_last_error_message(void);

/**
 * Static name of a status code, for log lines.
 */
const char *refless_status_name(enum refless_status status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFLESS_H */
