#ifndef NATANZON_H
#define NATANZON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NzStatus {
  NZ_STATUS_OK = 0,
  NZ_STATUS_NULL_POINTER = 1,
  NZ_STATUS_INVALID_PARAMS = 2,
  NZ_STATUS_DOMAIN = 3,
  NZ_STATUS_COMPUTATION = 4,
  NZ_STATUS_OUT_OF_RANGE = 5,
  NZ_STATUS_PANIC = 6,
} NzStatus;

/**
 * Opaque parameter set.
 */
typedef struct NzParams NzParams;

/**
 * Opaque list of bound states, ordered by `nu`.
 */
typedef struct NzSpectrum NzSpectrum;

/**
 * One bound state copied out of an [`NzSpectrum`].
 */
typedef struct NzBoundState {
  size_t nu;
  double energy;
  double alpha;
  double beta;
  double delta;
  double p;
  double q;
  double m;
  /**
   * True when the state sits on the continuum threshold.
   */
  bool threshold;
} NzBoundState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *nz_last_error_message(void);

/**
 * Validates the six constants and writes a new handle to `out`.
 *
 * # Safety
 * `out` must be NULL or valid for a pointer write.
 */
enum NzStatus nz_params_new(double f,
                            double h0,
                            double h1,
                            double a,
                            double c0,
                            double c1,
                            struct NzParams **out);

/**
 * Handle for the Pöschl–Teller set `(A, B)`; `shifted` selects the
 * convention with vanishing asymptotic value.
 *
 * # Safety
 * `out` must be NULL or valid for a pointer write.
 */
enum NzStatus nz_params_from_pt(double a, double b, bool shifted, struct NzParams **out);

/**
 * # Safety
 * `p` must be NULL or a handle from `nz_params_*` not yet freed.
 */
void nz_params_free(struct NzParams *p);

/**
 * `V` at `z ∈ (0, 1)`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid for a write.
 */
enum NzStatus nz_potential_in_z(const struct NzParams *p, double z, double *out);

/**
 * Solves the bound-state spectrum and writes a new handle to `out`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid for a pointer write.
 */
enum NzStatus nz_spectrum_solve(const struct NzParams *p, struct NzSpectrum **out);

/**
 * Number of states; 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live spectrum handle.
 */
size_t nz_spectrum_len(const struct NzSpectrum *s);

/**
 * Copies state `index` into `out`.
 *
 * # Safety
 * `s` must be a live spectrum handle; `out` must be valid for a write.
 */
enum NzStatus nz_spectrum_get(const struct NzSpectrum *s, size_t index, struct NzBoundState *out);

/**
 * # Safety
 * `s` must be NULL or a spectrum handle not yet freed.
 */
void nz_spectrum_free(struct NzSpectrum *s);

/**
 * Reflection ratio `R_m` of the channel with spectral parameter `λ`,
 * starting weight `m0` and scale `c1`.
 *
 * # Safety
 * `out_re` and `out_im` must be valid for writes.
 */
enum NzStatus nz_reflection_coefficient(double lambda_re,
                                        double lambda_im,
                                        double m0,
                                        double c1,
                                        double m,
                                        double *out_re,
                                        double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NATANZON_H */
