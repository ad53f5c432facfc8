//! Conventional and complex FDLP.
//!
//! Conventional FDLP predicts the DCT of the signal; the resulting model
//! response over `[0, 2pi)` is the even-symmetrized squared Hilbert envelope,
//! spanning twice the signal duration. Complex FDLP predicts the inverse DFT
//! of the signal; its response spans the original signal once, start to end.
//!
//! Envelopes are reported in power units: the all-pole response is divided
//! by the source length, so the envelope mean equals the mean-square value
//! of the input.

use crate::dsp::{dct2, hilbert_envelope, inverse_bin, real_forward, Envelope, Signal, C64};
use crate::error::{Error, Result};
use crate::lp::{autocorrelate_real, levinson, AutocorrSequence, lp_power_response, LpModel, ModelDomain};

fn check_order(x: &Signal, order: usize) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyInput { op: "fdlp" });
    }
    if order >= x.len() {
        return Err(Error::Argument(format!(
            "model order {order} must be below the signal length {}",
            x.len()
        )));
    }
    Ok(())
}

/// Linear prediction of the orthonormal DCT-II of `x`.
pub fn conventional_fdlp(x: &Signal, order: usize) -> Result<LpModel> {
    check_order(x, order)?;
    let dct = dct2(x.samples())?;
    let mut model = levinson(&autocorrelate_real(&dct, order)?, order)?;
    model.domain = ModelDomain::ConventionalFdlp;
    model.source_len = x.len();
    model.duration_s = 2.0 * x.duration_s();
    Ok(model)
}

/// Autocorrelation of `idft(x)` for real `x`, without forming the
/// transform. Its circular lags are `sum_m x[m]^2 e^{j 2 pi m k / N}`, and
/// the wrapped part of lag `k` is `sum_{n<k} X[n] X[k-n]`, which needs only
/// the first `max_lag` bins because `X[N-j] = conj(X[j])`.
pub fn spectral_autocorrelation(x: &[f64], max_lag: usize) -> Result<AutocorrSequence> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput { op: "spectral_autocorrelation" });
    }
    if max_lag >= n {
        return Err(Error::Argument(format!(
            "max lag {max_lag} must be below the sequence length {n}"
        )));
    }
    let squared: Vec<f64> = x.iter().map(|v| v * v).collect();
    let power = real_forward(&squared);
    let half = real_forward(x);
    let bins: Vec<C64> = (0..=max_lag).map(|k| inverse_bin(&half, n, k)).collect();
    let sqrt_n = (n as f64).sqrt();
    let r = (0..=max_lag)
        .map(|k| {
            let circular = inverse_bin(&power, n, k) * sqrt_n;
            let wrapped: C64 = (0..k).map(|i| bins[i] * bins[k - i]).sum();
            circular - wrapped
        })
        .collect();
    AutocorrSequence::from_values(r)
}

/// Linear prediction of the inverse DFT of `x`.
pub fn complex_fdlp(x: &Signal, order: usize) -> Result<LpModel> {
    check_order(x, order)?;
    let mut model = levinson(&spectral_autocorrelation(x.samples(), order)?, order)?;
    model.domain = ModelDomain::ComplexFdlp;
    model.source_len = x.len();
    model.duration_s = x.duration_s();
    Ok(model)
}

/// Samples the model response on a physical time axis.
///
/// The full response covers `m.duration_s`. With `half = true` (conventional
/// models only) the first half is returned, which covers the original
/// signal `[0, T)` rather than its mirrored copy.
pub fn envelope(m: &LpModel, n_points: usize, half: bool) -> Result<Envelope> {
    if half && m.domain != ModelDomain::ConventionalFdlp {
        return Err(Error::Argument(
            "half envelopes exist only for conventional (even-symmetric) models".into(),
        ));
    }
    let response = lp_power_response(m, n_points)?;
    let norm = m.source_len.max(1) as f64;
    let dt = m.duration_s / n_points as f64;
    let keep = if half { n_points / 2 } else { n_points };
    Ok(Envelope {
        values: response[..keep].iter().map(|v| v / norm).collect(),
        time_axis: (0..keep).map(|i| i as f64 * dt).collect(),
        symmetric: m.domain == ModelDomain::ConventionalFdlp && !half,
    })
}

/// Envelope on the default grid: one point per source sample over the span
/// of the original signal (half of the symmetric response for conventional
/// models).
pub fn signal_envelope(m: &LpModel) -> Result<Envelope> {
    match m.domain {
        ModelDomain::ConventionalFdlp => envelope(m, 2 * m.source_len, true),
        _ => envelope(m, m.source_len.max(m.order() + 1), false),
    }
}

/// The smooth target both FDLP variants approximate over the original
/// signal span: the squared Hilbert envelope.
pub fn squared_hilbert_envelope(x: &Signal) -> Result<Vec<f64>> {
    Ok(hilbert_envelope(x)?.values.iter().map(|v| v * v).collect())
}

/// Relative L2 error `min_s ||s e - t|| / ||t||`.
///
/// The optimal scale `s` is taken out because the two FDLP variants and the
/// squared Hilbert envelope differ by constant power factors (a squared
/// carrier averages to half its squared envelope).
pub fn fit_error(estimate: &[f64], target: &[f64]) -> f64 {
    let n = estimate.len().min(target.len());
    let (e, t) = (&estimate[..n], &target[..n]);
    let et: f64 = e.iter().zip(t).map(|(a, b)| a * b).sum();
    let ee: f64 = e.iter().map(|a| a * a).sum();
    let tt: f64 = t.iter().map(|b| b * b).sum();
    if ee == 0.0 || tt == 0.0 {
        return 1.0;
    }
    let s = et / ee;
    let resid: f64 = e.iter().zip(t).map(|(a, b)| (s * a - b).powi(2)).sum();
    (resid / tt).sqrt()
}
