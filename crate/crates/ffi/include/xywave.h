#ifndef XYWAVE_H
#define XYWAVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  XYWAVE_STATUS_OK = 0,
  XYWAVE_STATUS_NULL_POINTER = 1,
  XYWAVE_STATUS_INVALID_PARAMETER = 2,
  XYWAVE_STATUS_NOT_CONVERGED = 3,
  XYWAVE_STATUS_INVALID_STATE = 4,
  XYWAVE_STATUS_OUT_OF_RANGE = 5,
  XYWAVE_STATUS_PANIC = 6,
} XywaveStatus;

/*
 Periodic chain diagonalized exactly.
 */
typedef struct XywaveChain XywaveChain;

/*
 Table of thermal correlators `G_x` for one `(λ, γ, β)`.
 */
typedef struct XywaveThermal XywaveThermal;

/*
 Zero-temperature single-excitation profile after a local measurement.
 */
typedef struct XywaveWave XywaveWave;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread; empty after a success.
 The pointer stays valid until the next library call on this thread.
 */
const char *xywave_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *xywave_version(void);

/*
 Computes `G_x` for every `x` in `[-max_offset, max_offset]`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
XywaveStatus xywave_thermal_new(double lambda,
                                double gamma,
                                double beta,
                                uint32_t max_offset,
                                XywaveThermal **out);

/*
 # Safety
 `handle` must come from [`xywave_thermal_new`] and not be used afterwards.
 */
void xywave_thermal_free(XywaveThermal *handle);

/*
 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_thermal_g(const XywaveThermal *handle, int64_t x, double *out);

/*
 Single-site `⟨σ_z⟩`.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_thermal_magnetization(const XywaveThermal *handle, double *out);

/*
 `⟨σˣσˣ⟩`, `⟨σʸσʸ⟩`, `⟨σᶻσᶻ⟩` at separation `x ≠ 0`, written to `out[0..3]`.

 # Safety
 `handle` must be live; `out` must point to three writable doubles.
 */
XywaveStatus xywave_thermal_pair(const XywaveThermal *handle,
                                 int64_t x,
                                 double *out);

/*
 Concurrence of the reduced state of two sites at separation `x ≠ 0`.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_thermal_concurrence(const XywaveThermal *handle, int64_t x, double *out);

/*
 Nearest-neighbour concurrence of the isotropic chain from `G_0` and `G_1`.
 */
double xywave_concurrence_closed(double g0, double g1);

/*
 `⟨σ_z(t)⟩/2` at offset `x` from a site measured at `t = 0` (isotropic chain).
 `selective` non-zero conditions on the up outcome; zero discards it.

 # Safety
 `out` must be writable.
 */
XywaveStatus xywave_magnetization_after_measurement(double lambda,
                                                    double beta,
                                                    int64_t x,
                                                    double t,
                                                    int32_t selective,
                                                    double *out);

/*
 Amplitude profile at time `t` of the excitation created at site `measured_site`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
XywaveStatus xywave_wave_new(int64_t measured_site, double t, double lambda, XywaveWave **out);

/*
 # Safety
 `handle` must come from [`xywave_wave_new`] and not be used afterwards.
 */
void xywave_wave_free(XywaveWave *handle);

/*
 Real amplitude `w` at an absolute site; zero outside the stored window.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_wave_amplitude(const XywaveWave *handle, int64_t site, double *out);

/*
 Amplitude at offset `x` from the measured site.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_wave_at_offset(const XywaveWave *handle, int64_t x, double *out);

/*
 Inclusive site range holding the stored amplitudes.

 # Safety
 `handle` must be live; `first` and `last` must be writable.
 */
XywaveStatus xywave_wave_window(const XywaveWave *handle, int64_t *first, int64_t *last);

/*
 Offset from the measured site with the largest fidelity.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_wave_fidelity_peak(const XywaveWave *handle, int64_t *out);

/*
 Exact diagonalization of a periodic chain of `sites` spins.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
XywaveStatus xywave_chain_new(size_t sites, double lambda, double gamma, XywaveChain **out);

/*
 # Safety
 `handle` must come from [`xywave_chain_new`] and not be used afterwards.
 */
void xywave_chain_free(XywaveChain *handle);

/*
 Thermal expectation of a Pauli string such as `"X0 X1"` or `"Z3"`.

 # Safety
 `handle` must be live; `pauli` must be a NUL-terminated string; `out` must be writable.
 */
XywaveStatus xywave_chain_expectation(const XywaveChain *handle,
                                      double beta,
                                      const char *pauli,
                                      double *out);

/*
 `⟨σ_z^m(t)⟩/2` after measuring site `l` at `t = 0`.

 # Safety
 `handle` must be live; `out` must be writable.
 */
XywaveStatus xywave_chain_conditional_dynamics(const XywaveChain *handle,
                                               double beta,
                                               size_t measured,
                                               size_t site,
                                               double t,
                                               int32_t selective,
                                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XYWAVE_H */
