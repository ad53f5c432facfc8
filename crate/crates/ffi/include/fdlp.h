#ifndef FDLP_H
#define FDLP_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FdlpStatus {
  FDLP_STATUS_OK = 0,
  FDLP_STATUS_NULL_POINTER = 1,
  FDLP_STATUS_INVALID_ARGUMENT = 2,
  FDLP_STATUS_DEGENERATE_SIGNAL = 3,
  FDLP_STATUS_ILL_CONDITIONED = 4,
  FDLP_STATUS_UNSTABLE = 5,
  FDLP_STATUS_NON_CONVERGENCE = 6,
  FDLP_STATUS_NUMERIC = 7,
  FDLP_STATUS_BUFFER_TOO_SMALL = 8,
  FDLP_STATUS_IO = 9,
  FDLP_STATUS_FORMAT = 10,
  FDLP_STATUS_PANIC = 11,
} FdlpStatus;

/**
 * Opaque frames x bands feature matrix.
 */
typedef struct FdlpFeatures FdlpFeatures;

/**
 * Opaque all-pole model.
 */
typedef struct FdlpModel FdlpModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Conventional FDLP (linear prediction of the DCT) of a real signal.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum FdlpStatus fdlp_conventional(const double *samples,
                                  size_t len,
                                  double sample_rate,
                                  size_t order,
                                  struct FdlpModel **out);

/**
 * Complex FDLP (linear prediction of the inverse DFT) of a real signal.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum FdlpStatus fdlp_complex(const double *samples,
                             size_t len,
                             double sample_rate,
                             size_t order,
                             struct FdlpModel **out);

/**
 * Model order, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t fdlp_model_order(const struct FdlpModel *model);

/**
 * Model gain `G`, or NaN for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
double fdlp_model_gain(const struct FdlpModel *model);

/**
 * Seconds spanned by the full model response, or NaN for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
double fdlp_model_duration(const struct FdlpModel *model);

/**
 * Copies the prediction coefficients into `re` and `im`, each holding at
 * least `capacity` values.
 *
 * # Safety
 * `model` must be a live handle; `re` and `im` must hold `capacity` doubles.
 */
enum FdlpStatus fdlp_model_coeffs(const struct FdlpModel *model,
                                  double *re,
                                  double *im,
                                  size_t capacity);

/**
 * Power envelope over the original signal span, one value per sample.
 * `needed` (nullable) receives the length.
 *
 * # Safety
 * `model` must be a live handle; `out` must hold `capacity` doubles.
 */
enum FdlpStatus fdlp_model_envelope(const struct FdlpModel *model,
                                    double *out,
                                    size_t capacity,
                                    size_t *needed);

/**
 * `|c[0..n_coeffs]|`; bin `f` sits at `f / duration` Hz.
 *
 * # Safety
 * `model` must be a live handle; `out` must hold `n_coeffs` doubles.
 */
enum FdlpStatus fdlp_model_modulation_spectrum(const struct FdlpModel *model,
                                               size_t n_coeffs,
                                               double *out);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void fdlp_model_free(struct FdlpModel *model);

/**
 * FDLP-spectrogram with the default 1.5 s window and 0.75 s hop.
 *
 * # Safety
 * `samples` must point to `len` doubles; `out` must be writable.
 */
enum FdlpStatus fdlp_spectrogram_compute(const double *samples,
                                         size_t len,
                                         double sample_rate,
                                         size_t n_bands,
                                         size_t order,
                                         double frame_rate_hz,
                                         struct FdlpFeatures **out);

/**
 * # Safety
 * `features` must be null or a live handle.
 */
size_t fdlp_features_frames(const struct FdlpFeatures *features);

/**
 * # Safety
 * `features` must be null or a live handle.
 */
size_t fdlp_features_bands(const struct FdlpFeatures *features);

/**
 * Row-major `frames * bands` natural-log features.
 *
 * # Safety
 * `features` must be a live handle; `out` must hold `capacity` doubles.
 */
enum FdlpStatus fdlp_features_data(const struct FdlpFeatures *features,
                                   double *out,
                                   size_t capacity);

/**
 * # Safety
 * `features` must be null or a handle not yet freed.
 */
void fdlp_features_free(struct FdlpFeatures *features);

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *fdlp_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDLP_H */
