//! Transform and synthesis primitives.
//!
//! All transforms use the unitary convention: both the forward and the
//! inverse DFT carry a `1/sqrt(N)` factor, so `|idft(x)| == |dft(x)|`
//! elementwise for real input.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use realfft::RealFftPlanner;
use rustdct::DctPlanner;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static DCT_PLANNER: RefCell<DctPlanner<f64>> = RefCell::new(DctPlanner::new());
    static REAL_PLANNER: RefCell<RealFftPlanner<f64>> = RefCell::new(RealFftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// Unnormalized in-place FFT. `inverse` selects the `e^{+j...}` kernel.
pub(crate) fn fft_in_place(buf: &mut [C64], inverse: bool) {
    if buf.is_empty() {
        return;
    }
    let dir = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    plan(buf.len(), dir).process(buf);
}

/// A uniformly sampled real waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Argument(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        Ok(Signal {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds, `len / sample_rate`.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Copy of the signal with every sample multiplied by `gain`.
    pub fn scaled(&self, gain: f64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|s| s * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Time,
    Frequency,
    Dct,
}

impl Domain {
    fn transformed(self) -> Domain {
        match self {
            Domain::Time => Domain::Frequency,
            Domain::Frequency | Domain::Dct => Domain::Time,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    pub values: Vec<C64>,
    pub domain: Domain,
}

impl ComplexSequence {
    pub fn new(values: Vec<C64>, domain: Domain) -> Self {
        ComplexSequence { values, domain }
    }

    pub fn from_real(values: &[f64], domain: Domain) -> Self {
        ComplexSequence {
            values: values.iter().map(|&v| C64::new(v, 0.0)).collect(),
            domain,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

fn unitary(x: &ComplexSequence, inverse: bool, op: &'static str) -> Result<ComplexSequence> {
    if x.is_empty() {
        return Err(Error::EmptyInput { op });
    }
    let mut buf = x.values.clone();
    fft_in_place(&mut buf, inverse);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(ComplexSequence::new(buf, x.domain.transformed()))
}

/// Unitary forward DFT, `X[k] = N^{-1/2} sum_n x[n] e^{-j 2 pi k n / N}`.
pub fn dft(x: &ComplexSequence) -> Result<ComplexSequence> {
    unitary(x, false, "dft")
}

/// Unitary inverse DFT, `x[n] = N^{-1/2} sum_k X[k] e^{+j 2 pi k n / N}`.
pub fn idft(x: &ComplexSequence) -> Result<ComplexSequence> {
    unitary(x, true, "idft")
}

/// Unnormalized forward DFT of a real sequence, bins `0..=N/2`.
pub(crate) fn real_forward(x: &[f64]) -> Vec<C64> {
    let forward = REAL_PLANNER.with(|p| p.borrow_mut().plan_fft_forward(x.len()));
    let mut input = x.to_vec();
    let mut half = forward.make_output_vec();
    forward
        .process(&mut input, &mut half)
        .expect("buffer lengths match the plan");
    half
}

/// Bin `k` of the unitary inverse DFT of a real length-`n` sequence, given
/// its [`real_forward`] half spectrum.
pub(crate) fn inverse_bin(half: &[C64], n: usize, k: usize) -> C64 {
    let scale = 1.0 / (n as f64).sqrt();
    // the forward kernel is the conjugate of the inverse one
    if k < half.len() {
        half[k].conj() * scale
    } else {
        half[n - k] * scale
    }
}

/// [`idft`] of a real sequence through a real-input FFT; the upper half
/// of the result is the conjugate mirror of the lower half.
pub fn idft_real(x: &[f64]) -> Result<ComplexSequence> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput { op: "idft_real" });
    }
    let half = real_forward(x);
    let values = (0..n).map(|k| inverse_bin(&half, n, k)).collect();
    Ok(ComplexSequence::new(values, Domain::Frequency))
}

/// Orthonormal DCT-II,
/// `X[k] = s_k sum_n x[n] cos(pi k (2n + 1) / 2N)` with `s_0 = sqrt(1/N)`
/// and `s_k = sqrt(2/N)` otherwise.
pub fn dct2(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput { op: "dct2" });
    }
    let mut buf = x.to_vec();
    DCT_PLANNER.with(|p| p.borrow_mut().plan_dct2(n)).process_dct2(&mut buf);
    let nf = n as f64;
    let ac_scale = (2.0 / nf).sqrt();
    buf.iter_mut().for_each(|v| *v *= ac_scale);
    buf[0] *= std::f64::consts::FRAC_1_SQRT_2;
    Ok(buf)
}

/// Analytic signal by the one-sided spectrum construction: negative
/// frequencies zeroed, positive ones doubled, DC and Nyquist kept as is.
pub fn analytic_signal(x: &[f64]) -> Result<ComplexSequence> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput {
            op: "analytic_signal",
        });
    }
    let mut buf: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    // bins 1..ceil(n/2) are strictly positive frequencies
    let positive_end = n.div_ceil(2);
    for v in &mut buf[1..positive_end] {
        *v *= 2.0;
    }
    let negative_start = n / 2 + 1;
    for v in &mut buf[negative_start..] {
        *v = C64::new(0.0, 0.0);
    }
    fft_in_place(&mut buf, true);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(ComplexSequence::new(buf, Domain::Time))
}

/// A non-negative envelope on a physical time axis.
///
/// FDLP envelopes are in power units (mean-square amplitude); the Hilbert
/// envelope returned by [`hilbert_envelope`] is in amplitude units.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub values: Vec<f64>,
    /// Seconds.
    pub time_axis: Vec<f64>,
    /// True for the full even-symmetrized response of a conventional model.
    pub symmetric: bool,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Magnitude of the analytic signal.
pub fn hilbert_envelope(x: &Signal) -> Result<Envelope> {
    let analytic = analytic_signal(x.samples())?;
    let fs = x.sample_rate();
    Ok(Envelope {
        values: analytic.magnitudes(),
        time_axis: (0..x.len()).map(|i| i as f64 / fs).collect(),
        symmetric: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// DFT-even; constant overlap-add at 50% hop.
    Periodic,
    /// Both endpoints exactly zero.
    Symmetric,
}

pub fn hanning(n: usize, mode: WindowMode) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "hanning window needs at least 2 points, got {n}"
        )));
    }
    let denom = match mode {
        WindowMode::Periodic => n as f64,
        WindowMode::Symmetric => (n - 1) as f64,
    };
    Ok((0..n)
        .map(|k| {
            let v = 0.5 - 0.5 * (2.0 * PI * k as f64 / denom).cos();
            // cos rounding leaves ~1e-17 residue at the endpoints
            if mode == WindowMode::Symmetric && (k == 0 || k == n - 1) {
                0.0
            } else {
                v
            }
        })
        .collect())
}

/// One sinusoidal envelope component of an AM test signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmComponent {
    pub freq_hz: f64,
    pub depth: f64,
    /// Degrees.
    pub phase_deg: f64,
}

/// `x(t) = (1 - sum_i depth_i cos(2 pi f_i t + phase_i)) sin(2 pi f_c t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmSignalSpec {
    pub carrier_hz: f64,
    pub components: Vec<AmComponent>,
    pub duration_s: f64,
    pub sample_rate: f64,
}

impl AmSignalSpec {
    pub const DEFAULT_SAMPLE_RATE: f64 = 8000.0;

    /// Single-component signal at the default 8 kHz rate.
    pub fn single(carrier_hz: f64, freq_hz: f64, depth: f64, phase_deg: f64, duration_s: f64) -> Self {
        AmSignalSpec {
            carrier_hz,
            components: vec![AmComponent {
                freq_hz,
                depth,
                phase_deg,
            }],
            duration_s,
            sample_rate: Self::DEFAULT_SAMPLE_RATE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let depth_sum: f64 = self.components.iter().map(|c| c.depth).sum();
        if depth_sum >= 1.0 {
            return Err(Error::Validation(format!(
                "modulation depths sum to {depth_sum}, must be < 1"
            )));
        }
        if let Some(c) = self.components.iter().find(|c| c.depth < 0.0) {
            return Err(Error::Validation(format!(
                "negative modulation depth {}",
                c.depth
            )));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::Validation(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.sample_rate > 0.0) {
            return Err(Error::Validation(format!(
                "sample rate must be positive, got {}",
                self.sample_rate
            )));
        }
        for c in &self.components {
            if !(c.freq_hz > 0.0 && c.freq_hz < self.carrier_hz) {
                return Err(Error::Validation(format!(
                    "modulation frequency {} Hz must lie in (0, carrier {} Hz)",
                    c.freq_hz, self.carrier_hz
                )));
            }
        }
        Ok(())
    }

    /// The modulating factor `1 - sum_i depth_i cos(...)` at time `t`.
    pub fn envelope_at(&self, t: f64) -> f64 {
        1.0 - self
            .components
            .iter()
            .map(|c| c.depth * (2.0 * PI * c.freq_hz * t + c.phase_deg.to_radians()).cos())
            .sum::<f64>()
    }
}

pub fn synth_am(spec: &AmSignalSpec) -> Result<Signal> {
    spec.validate()?;
    let n = (spec.duration_s * spec.sample_rate).round() as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / spec.sample_rate;
            spec.envelope_at(t) * (2.0 * PI * spec.carrier_hz * t).sin()
        })
        .collect();
    Signal::new(samples, spec.sample_rate)
}

/// Largest elementwise `| |idft(x)| - |dft(x)| |`.
///
/// Zero up to rounding for real `x`. For complex `x` the two magnitude
/// sequences are index reflections of each other instead, see
/// [`verify_reflected_magnitude_identity`].
pub fn verify_fourier_magnitude_identity(x: &[C64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput {
            op: "verify_fourier_magnitude_identity",
        });
    }
    let seq = ComplexSequence::new(x.to_vec(), Domain::Time);
    let forward = dft(&seq)?;
    let inverse = idft(&seq)?;
    Ok(forward
        .values
        .iter()
        .zip(&inverse.values)
        .map(|(f, i)| (f.norm() - i.norm()).abs())
        .fold(0.0, f64::max))
}

/// Largest `| |idft(x)[k]| - |dft(x)[(N - k) mod N]| |`, which vanishes for
/// every complex sequence.
pub fn verify_reflected_magnitude_identity(x: &[C64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput {
            op: "verify_reflected_magnitude_identity",
        });
    }
    let n = x.len();
    let seq = ComplexSequence::new(x.to_vec(), Domain::Time);
    let forward = dft(&seq)?;
    let inverse = idft(&seq)?;
    Ok((0..n)
        .map(|k| (inverse.values[k].norm() - forward.values[(n - k) % n].norm()).abs())
        .fold(0.0, f64::max))
}
