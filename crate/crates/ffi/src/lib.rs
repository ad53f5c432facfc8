//! C ABI over `fdlp`.
//!
//! Models and feature matrices are opaque heap handles released with their
//! `*_free` function. Every fallible call returns an [`FdlpStatus`]; on
//! failure [`fdlp_last_error_message`] describes the error for the calling
//! thread. Output arrays are caller-allocated, and calls that fill them take
//! the array capacity and report the element count needed.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fdlp::cepstrum::modulation_spectrum;
use fdlp::models::{complex_fdlp, conventional_fdlp, signal_envelope};
use fdlp::spectrogram::{fdlp_spectrogram, SpectrogramConfig};
use fdlp::{Error, FeatureMatrix, LpModel, Signal};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdlpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateSignal = 3,
    IllConditioned = 4,
    Unstable = 5,
    NonConvergence = 6,
    Numeric = 7,
    BufferTooSmall = 8,
    Io = 9,
    Format = 10,
    Panic = 11,
}

/// Opaque all-pole model.
pub struct FdlpModel {
    inner: LpModel,
}

/// Opaque frames x bands feature matrix.
pub struct FdlpFeatures {
    inner: FeatureMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FdlpStatus {
    match e {
        Error::EmptyInput { .. } | Error::Argument(_) | Error::Validation(_) => FdlpStatus::InvalidArgument,
        Error::DegenerateSignal | Error::DegenerateModel { .. } => FdlpStatus::DegenerateSignal,
        Error::IllConditioned { .. } => FdlpStatus::IllConditioned,
        Error::Instability { .. } | Error::NotMinimumPhase { .. } | Error::Resolution { .. } => {
            FdlpStatus::Unstable
        }
        Error::NonConvergence { .. } => FdlpStatus::NonConvergence,
        Error::Numeric { .. } => FdlpStatus::Numeric,
        Error::Io { .. } => FdlpStatus::Io,
        Error::UnsupportedFormat { .. } | Error::Parse { .. } => FdlpStatus::Format,
    }
}

/// Runs `f`, turning errors and panics into a status plus a thread-local
/// message.
fn guard(f: impl FnOnce() -> Result<(), FdlpStatus>) -> FdlpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdlpStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            FdlpStatus::Panic
        }
    }
}

fn lift<T>(r: fdlp::Result<T>) -> Result<T, FdlpStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> FdlpStatus {
    set_error(format!("{what} is null"));
    FdlpStatus::NullPointer
}

/// # Safety
/// `samples` must point to `len` readable doubles.
unsafe fn signal_from(samples: *const f64, len: usize, sample_rate: f64) -> Result<Signal, FdlpStatus> {
    if samples.is_null() {
        return Err(null("samples"));
    }
    let data = std::slice::from_raw_parts(samples, len).to_vec();
    lift(Signal::new(data, sample_rate))
}

/// # Safety
/// `out` must be null or point to `capacity` writable doubles.
unsafe fn fill(values: &[f64], out: *mut f64, capacity: usize, needed: *mut usize) -> Result<(), FdlpStatus> {
    if !needed.is_null() {
        *needed = values.len();
    }
    if capacity < values.len() {
        set_error(format!("buffer holds {capacity} values, {} needed", values.len()));
        return Err(FdlpStatus::BufferTooSmall);
    }
    if out.is_null() {
        return Err(null("out"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// # Safety
/// `samples` must point to `len` doubles and `out` to a writable handle slot.
unsafe fn fit(
    samples: *const f64,
    len: usize,
    sample_rate: f64,
    order: usize,
    out: *mut *mut FdlpModel,
    method: fn(&Signal, usize) -> fdlp::Result<LpModel>,
) -> FdlpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let x = signal_from(samples, len, sample_rate)?;
        let inner = lift(method(&x, order))?;
        *out = Box::into_raw(Box::new(FdlpModel { inner }));
        Ok(())
    })
}

/// Conventional FDLP (linear prediction of the DCT) of a real signal.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdlp_conventional(
    samples: *const f64,
    len: usize,
    sample_rate: f64,
    order: usize,
    out: *mut *mut FdlpModel,
) -> FdlpStatus {
    fit(samples, len, sample_rate, order, out, conventional_fdlp)
}

/// Complex FDLP (linear prediction of the inverse DFT) of a real signal.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdlp_complex(
    samples: *const f64,
    len: usize,
    sample_rate: f64,
    order: usize,
    out: *mut *mut FdlpModel,
) -> FdlpStatus {
    fit(samples, len, sample_rate, order, out, complex_fdlp)
}

/// Model order, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_order(model: *const FdlpModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.order())
}

/// Model gain `G`, or NaN for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_gain(model: *const FdlpModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.inner.gain)
}

/// Seconds spanned by the full model response, or NaN for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_duration(model: *const FdlpModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.inner.duration_s)
}

/// Copies the prediction coefficients into `re` and `im`, each holding at
/// least `capacity` values.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_coeffs(
    model: *const FdlpModel,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> FdlpStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let reals: Vec<f64> = m.inner.coeffs.iter().map(|c| c.re).collect();
        let imags: Vec<f64> = m.inner.coeffs.iter().map(|c| c.im).collect();
        fill(&reals, re, capacity, ptr::null_mut())?;
        fill(&imags, im, capacity, ptr::null_mut())
    })
}

/// Power envelope over the original signal span, one value per sample.
/// `needed` (nullable) receives the length.
///
/// # Safety
/// `model` must be a live handle; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_envelope(
    model: *const FdlpModel,
    out: *mut f64,
    capacity: usize,
    needed: *mut usize,
) -> FdlpStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let env = lift(signal_envelope(&m.inner))?;
        fill(&env.values, out, capacity, needed)
    })
}

/// `|c[0..n_coeffs]|`; bin `f` sits at `f / duration` Hz.
///
/// # Safety
/// `model` must be a live handle; `out` must hold `n_coeffs` doubles.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_modulation_spectrum(
    model: *const FdlpModel,
    n_coeffs: usize,
    out: *mut f64,
) -> FdlpStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let spec = lift(modulation_spectrum(&m.inner, n_coeffs))?;
        fill(&spec.magnitudes, out, n_coeffs, ptr::null_mut())
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdlp_model_free(model: *mut FdlpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// FDLP-spectrogram with the default 1.5 s window and 0.75 s hop.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdlp_spectrogram_compute(
    samples: *const f64,
    len: usize,
    sample_rate: f64,
    n_bands: usize,
    order: usize,
    frame_rate_hz: f64,
    out: *mut *mut FdlpFeatures,
) -> FdlpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let x = signal_from(samples, len, sample_rate)?;
        let cfg = SpectrogramConfig {
            n_bands,
            lp_order: order,
            frame_rate_hz,
            ..SpectrogramConfig::with_sample_rate(sample_rate)
        };
        let inner = lift(fdlp_spectrogram(&x, &cfg))?;
        *out = Box::into_raw(Box::new(FdlpFeatures { inner }));
        Ok(())
    })
}

/// # Safety
/// `features` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdlp_features_frames(features: *const FdlpFeatures) -> usize {
    features.as_ref().map_or(0, |f| f.inner.n_frames)
}

/// # Safety
/// `features` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdlp_features_bands(features: *const FdlpFeatures) -> usize {
    features.as_ref().map_or(0, |f| f.inner.n_bands)
}

/// Row-major `frames * bands` natural-log features.
///
/// # Safety
/// `features` must be a live handle; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn fdlp_features_data(
    features: *const FdlpFeatures,
    out: *mut f64,
    capacity: usize,
) -> FdlpStatus {
    guard(|| {
        let f = features.as_ref().ok_or_else(|| null("features"))?;
        fill(&f.inner.data, out, capacity, ptr::null_mut())
    })
}

/// # Safety
/// `features` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdlp_features_free(features: *mut FdlpFeatures) {
    if !features.is_null() {
        drop(Box::from_raw(features));
    }
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fdlp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
