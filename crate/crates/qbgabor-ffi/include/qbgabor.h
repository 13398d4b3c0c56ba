#ifndef QBGABOR_H
#define QBGABOR_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum QbgStatus {
  QBG_STATUS_OK = 0,
  /**
   * The lattice does not generate a frame.
   */
  QBG_STATUS_NOT_A_FRAME = 2,
  /**
   * File i/o or format failure.
   */
  QBG_STATUS_IO = 3,
  /**
   * Invalid argument or numerical precondition failure.
   */
  QBG_STATUS_INVALID = 4,
  /**
   * A null pointer was passed where data was required.
   */
  QBG_STATUS_NULL_ARGUMENT = 5,
  /**
   * An internal panic was caught; state may be stale.
   */
  QBG_STATUS_PANIC = 6,
} QbgStatus;

/**
 * Opaque coefficient grid.
 */
typedef struct QbgGrid QbgGrid;

/**
 * Opaque complex signal on `Z_L`.
 */
typedef struct QbgSignal QbgSignal;

/**
 * Opaque Gabor system (window plus lattice, with cached frame data).
 */
typedef struct QbgSystem QbgSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qbg_last_error_message(void);

/**
 * Create a signal from `len` samples; `im` may be null for a real signal.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `len` readable doubles.
 */
enum QbgStatus qbg_signal_create(uint32_t len,
                                 const double *re,
                                 const double *im,
                                 struct QbgSignal **out);

/**
 * Periodized unit-energy Gaussian window.
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
enum QbgStatus qbg_signal_gaussian(uint32_t len, struct QbgSignal **out);

/**
 * Compactly supported raised-cosine window.
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
enum QbgStatus qbg_signal_raised_cosine(uint32_t len, struct QbgSignal **out);

/**
 * Seeded complex white-noise signal; reproducible across platforms.
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
enum QbgStatus qbg_signal_random(uint32_t len, uint64_t seed, struct QbgSignal **out);

/**
 * Length of the signal, 0 for a null handle.
 *
 * # Safety
 * `signal` must be null or a live handle from this library.
 */
uint32_t qbg_signal_len(const struct QbgSignal *signal);

/**
 * Copy the samples into caller-provided buffers of the signal length;
 * `im` may be null to skip the imaginary parts.
 *
 * # Safety
 * `re` (and `im` when non-null) must hold `qbg_signal_len` doubles.
 */
enum QbgStatus qbg_signal_copy_data(const struct QbgSignal *signal, double *re, double *im);

/**
 * Read a signal file (binary or CSV).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a valid handle location.
 */
enum QbgStatus qbg_signal_read(const char *path, struct QbgSignal **out);

/**
 * Write a signal file (binary, or CSV for `.csv` paths).
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum QbgStatus qbg_signal_write(const struct QbgSignal *signal, const char *path);

/**
 * Release a signal handle; null is ignored.
 *
 * # Safety
 * `signal` must be a handle from this library, not yet freed.
 */
void qbg_signal_free(struct QbgSignal *signal);

/**
 * Build a Gabor system from a window and lattice steps `a`, `m`.
 *
 * # Safety
 * `window` must be a live signal handle; `out` a valid handle location.
 */
enum QbgStatus qbg_system_create(const struct QbgSignal *window,
                                 uint32_t a,
                                 uint32_t m,
                                 struct QbgSystem **out);

/**
 * Extreme eigenvalues of the frame operator, whether or not the system is
 * a frame.
 *
 * # Safety
 * `lower` and `upper` must be writable doubles.
 */
enum QbgStatus qbg_system_frame_bounds(const struct QbgSystem *system,
                                       double *lower,
                                       double *upper);

/**
 * Canonical dual window. `method` 0 is the dense solve; 1 is the
 * frame-bound iteration with `tol` and `max_iter`.
 *
 * # Safety
 * `out` must be a valid handle location.
 */
enum QbgStatus qbg_system_canonical_dual(const struct QbgSystem *system,
                                         uint32_t method,
                                         double tol,
                                         uint32_t max_iter,
                                         struct QbgSignal **out);

/**
 * Release a system handle; null is ignored.
 *
 * # Safety
 * `system` must be a handle from this library, not yet freed.
 */
void qbg_system_free(struct QbgSystem *system);

/**
 * Analyze a signal into coefficients; with `use_dual` nonzero the analysis
 * window is the canonical dual.
 *
 * # Safety
 * All handles must be live; `out` a valid handle location.
 */
enum QbgStatus qbg_dgt(const struct QbgSystem *system,
                       const struct QbgSignal *signal,
                       uint8_t use_dual,
                       struct QbgGrid **out);

/**
 * Synthesize a signal from coefficients; with `use_dual` nonzero the
 * synthesis window is the canonical dual.
 *
 * # Safety
 * All handles must be live; `out` a valid handle location.
 */
enum QbgStatus qbg_idgt(const struct QbgSystem *system,
                        const struct QbgGrid *grid,
                        uint8_t use_dual,
                        struct QbgSignal **out);

/**
 * Build a coefficient grid for the lattice `(l, a, m)` from row-major
 * samples (time index outer); `im` may be null.
 *
 * # Safety
 * `re`/`im` must hold `(l/a) * m` doubles; `out` a valid handle location.
 */
enum QbgStatus qbg_grid_create(uint32_t l,
                               uint32_t a,
                               uint32_t m,
                               const double *re,
                               const double *im,
                               struct QbgGrid **out);

/**
 * Grid dimensions: rows (time shifts) and columns (channels).
 *
 * # Safety
 * `rows` and `cols` must be writable.
 */
enum QbgStatus qbg_grid_dims(const struct QbgGrid *grid, uint32_t *rows, uint32_t *cols);

/**
 * Copy the coefficients in row-major order; `im` may be null.
 *
 * # Safety
 * `re` (and `im` when non-null) must hold `rows * cols` doubles.
 */
enum QbgStatus qbg_grid_copy_data(const struct QbgGrid *grid, double *re, double *im);

/**
 * Release a grid handle; null is ignored.
 *
 * # Safety
 * `grid` must be a handle from this library, not yet freed.
 */
void qbg_grid_free(struct QbgGrid *grid);

/**
 * Weighted `l^p` quasi-norm of a flat array; `im` and `weight` may be null
 * (real data, constant weight). `p` may be `INFINITY`.
 *
 * # Safety
 * Non-null pointers must hold `len` doubles; `out` must be writable.
 */
enum QbgStatus qbg_lp_norm(const double *re,
                           const double *im,
                           uint32_t len,
                           double p,
                           const double *weight,
                           double *out);

/**
 * Lorentz quasi-norm of the weighted rearrangement; `q` may be `INFINITY`
 * for the weak-type form.
 *
 * # Safety
 * Non-null pointers must hold `len` doubles; `out` must be writable.
 */
enum QbgStatus qbg_lorentz_star_norm(const double *re,
                                     const double *im,
                                     uint32_t len,
                                     double p,
                                     double q,
                                     const double *weight,
                                     double *out);

/**
 * Wiener-amalgam `l^p` norm of a signal over the window of the given
 * radius; `weight` of the signal length may be null.
 *
 * # Safety
 * `weight`, when non-null, must hold signal-length doubles; `out` writable.
 */
enum QbgStatus qbg_amalgam_lp_norm(const struct QbgSignal *signal,
                                   uint32_t radius,
                                   double p,
                                   const double *weight,
                                   double *out);

/**
 * Mixed `(p, q)` coefficient norm of a signal under the system: the inner
 * `p`-sum runs over time shifts, the outer `q`-sum over channels. `weight`
 * of length `rows * cols` may be null; `use_dual` selects dual-window
 * analysis.
 *
 * # Safety
 * `weight`, when non-null, must hold `rows * cols` doubles; `out` writable.
 */
enum QbgStatus qbg_modulation_norm(const struct QbgSystem *system,
                                   const struct QbgSignal *signal,
                                   double p,
                                   double q,
                                   const double *weight,
                                   uint8_t use_dual,
                                   double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QBGABOR_H */
