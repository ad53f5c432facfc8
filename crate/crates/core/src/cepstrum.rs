//! Complex cepstrum of all-pole models and the modulation spectrum.
//!
//! For `H(z) = G / A(z)` with `A(z) = 1 - sum_k alpha_k z^{-k}` minimum
//! phase, `log H(e^{j tau}) = sum_n c[n] e^{-j n tau}` with `c[n] = 0` for
//! `n < 0`. The log power response is then
//! `2 c[0] + sum_{n>=1} (c[n] e^{-j n tau} + conj)`, so `|c[n]|` is the
//! strength of the component completing `n` cycles over the response span.

use std::f64::consts::PI;

use crate::dsp::{fft_in_place, C64};
use crate::error::{Error, Result};
use crate::lp::{lp_power_response, LpModel, ModelDomain};

#[derive(Debug, Clone, PartialEq)]
pub struct Cepstrum {
    pub c: Vec<C64>,
    pub source_domain: ModelDomain,
    /// Time span of the model response the quefrency axis refers to.
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulationSpectrum {
    pub magnitudes: Vec<f64>,
    pub freqs_hz: Vec<f64>,
}

impl ModulationSpectrum {
    fn from_magnitudes(magnitudes: Vec<f64>, span_s: f64) -> Self {
        let freqs_hz = (0..magnitudes.len()).map(|f| f as f64 / span_s).collect();
        ModulationSpectrum {
            magnitudes,
            freqs_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Index of the bin closest to `hz`.
    pub fn bin(&self, hz: f64) -> usize {
        let step = self.freqs_hz.get(1).copied().unwrap_or(1.0);
        ((hz / step).round() as usize).min(self.len().saturating_sub(1))
    }

    pub fn magnitude_at(&self, hz: f64) -> f64 {
        self.magnitudes[self.bin(hz)]
    }

    /// Non-DC bins strictly greater than both neighbours.
    pub fn local_maxima(&self) -> Vec<usize> {
        let m = &self.magnitudes;
        (1..m.len().saturating_sub(1))
            .filter(|&i| m[i] > m[i - 1] && m[i] > m[i + 1])
            .collect()
    }

    /// The largest non-DC bin.
    pub fn dominant_bin(&self) -> Option<usize> {
        (1..self.len()).max_by(|&a, &b| self.magnitudes[a].total_cmp(&self.magnitudes[b]))
    }
}

/// Coefficient count covering modulations up to 30 Hz over `duration_s`.
pub fn default_n_coeffs(duration_s: f64) -> usize {
    (30.0 * duration_s).ceil() as usize + 1
}

fn check_gain(m: &LpModel) -> Result<()> {
    if m.gain > 0.0 && m.gain.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateModel { gain: m.gain })
    }
}

/// `c[0] = log G`, `c[n] = alpha_n + (1/n) sum_{k=1}^{n-1} k c[k] alpha_{n-k}`.
pub fn cepstral_recursion(m: &LpModel, n_coeffs: usize) -> Result<Cepstrum> {
    check_gain(m)?;
    if n_coeffs == 0 {
        return Err(Error::Argument("need at least one cepstral coefficient".into()));
    }
    let p = m.order();
    let alpha = |i: usize| m.coeffs[i - 1];
    let mut c = Vec::with_capacity(n_coeffs);
    c.push(C64::new(m.gain.ln(), 0.0));
    for n in 1..n_coeffs {
        // alpha_{n-k} vanishes once n - k > p
        let lo = n.saturating_sub(p).max(1);
        let acc: C64 = (lo..n).map(|k| c[k] * alpha(n - k) * k as f64).sum();
        let direct = if n <= p { alpha(n) } else { C64::new(0.0, 0.0) };
        c.push(direct + acc / n as f64);
    }
    Ok(Cepstrum {
        c,
        source_domain: m.domain,
        duration_s: m.duration_s,
    })
}

/// Largest principal-value phase step accepted between adjacent grid
/// points; larger steps cannot be told apart from a wrap.
const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Complex cepstrum by direct evaluation: `log H` on a dense grid with the
/// phase of `A` unwrapped incrementally, then an inverse DFT. Returns the
/// causal half (`grid / 2` coefficients).
pub fn cepstrum_oracle_fft(m: &LpModel, grid: usize) -> Result<Cepstrum> {
    check_gain(m)?;
    let min_grid = 8 * (m.order() + 1);
    if grid < min_grid {
        return Err(Error::Argument(format!(
            "grid of {grid} points is below 8 * (order + 1) = {min_grid}"
        )));
    }

    let mut a = m.inverse_filter();
    a.resize(grid, C64::new(0.0, 0.0));
    fft_in_place(&mut a, false);
    if let Some(i) = a.iter().position(|v| !(v.norm() > 0.0) || !v.is_finite()) {
        return Err(Error::Instability { index: i });
    }

    let mut phases = Vec::with_capacity(grid);
    phases.push(a[0].arg());
    for i in 1..grid {
        let step = (a[i] / a[i - 1]).arg();
        if step.abs() > MAX_PHASE_STEP {
            return Err(Error::Resolution {
                index: i - 1,
                jump: step,
            });
        }
        phases.push(phases[i - 1] + step);
    }
    let closing = phases[grid - 1] + (a[0] / a[grid - 1]).arg();
    let winding = ((closing - phases[0]) / (2.0 * PI)).round() as i64;
    if winding != 0 {
        return Err(Error::NotMinimumPhase { winding });
    }
    // log A of a minimum-phase A has only negative powers of z, hence zero
    // mean phase; pick that branch
    let mean = phases.iter().sum::<f64>() / grid as f64;
    let branch = 2.0 * PI * (mean / (2.0 * PI)).round();

    let log_g = m.gain.ln();
    let mut log_h: Vec<C64> = a
        .iter()
        .zip(&phases)
        .map(|(v, ph)| C64::new(log_g - v.norm().ln(), branch - ph))
        .collect();

    fft_in_place(&mut log_h, true);
    let scale = 1.0 / grid as f64;
    Ok(Cepstrum {
        c: log_h[..grid / 2].iter().map(|v| v * scale).collect(),
        source_domain: m.domain,
        duration_s: m.duration_s,
    })
}

/// `|c[f]|` with bin `f` at `f / duration` Hz, where the duration is the
/// span of the model response (twice the signal length for conventional
/// models, whose response is the even-symmetrized envelope).
pub fn modulation_spectrum(m: &LpModel, n_coeffs: usize) -> Result<ModulationSpectrum> {
    let cep = cepstral_recursion(m, n_coeffs)?;
    Ok(ModulationSpectrum::from_magnitudes(
        cep.c.iter().map(|v| v.norm()).collect(),
        cep.duration_s,
    ))
}

/// Two-transform baseline: evaluate the response, take its log, and
/// transform. Conventional models use only the first half of the response,
/// which covers the original signal span. Scaled so that for complex models
/// bin `f` estimates `|c[f]|` (the DC bin is halved to read `log G`).
pub fn modulation_spectrum_direct(m: &LpModel, n_points: usize) -> Result<ModulationSpectrum> {
    let response = lp_power_response(m, n_points)?;
    let (kept, span) = if m.domain == ModelDomain::ConventionalFdlp {
        (&response[..n_points / 2], m.duration_s / 2.0)
    } else {
        (&response[..], m.duration_s)
    };
    if kept.len() < 2 {
        return Err(Error::Argument(format!(
            "{n_points} response points leave nothing to transform"
        )));
    }
    let mut buf: Vec<C64> = kept.iter().map(|v| C64::new(v.ln(), 0.0)).collect();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / buf.len() as f64;
    let bins = buf.len() / 2 + 1;
    let mut magnitudes: Vec<f64> = buf[..bins].iter().map(|v| v.norm() * scale).collect();
    magnitudes[0] *= 0.5;
    Ok(ModulationSpectrum::from_magnitudes(magnitudes, span))
}
