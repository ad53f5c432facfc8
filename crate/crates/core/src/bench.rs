//! Paired wall-clock benchmark of conventional vs complex FDLP fits.

use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dsp::Signal;
use crate::error::{Error, Result};
use crate::models::{complex_fdlp, conventional_fdlp};

/// Seeded pink-like noise with a syllable-rate amplitude contour and the
/// low end rolled off below ~100 Hz. Same seed, same samples.
pub fn speech_shaped(n: usize, sample_rate: f64, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Paul Kellet's pink filter
    let mut b = [0.0f64; 7];
    let mut pink = Vec::with_capacity(n);
    for _ in 0..n {
        let white: f64 = rng.gen_range(-1.0..1.0);
        b[0] = 0.99886 * b[0] + white * 0.0555179;
        b[1] = 0.99332 * b[1] + white * 0.0750759;
        b[2] = 0.96900 * b[2] + white * 0.1538520;
        b[3] = 0.86650 * b[3] + white * 0.3104856;
        b[4] = 0.55000 * b[4] + white * 0.5329522;
        b[5] = -0.7616 * b[5] - white * 0.0168980;
        pink.push(b.iter().sum::<f64>() + white * 0.5362);
        b[6] = white * 0.115926;
    }

    let pole = 1.0 - 2.0 * std::f64::consts::PI * 100.0 / sample_rate;
    let rate_hz: f64 = rng.gen_range(3.0..6.0);
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (mut prev_in, mut prev_out) = (0.0, 0.0);
    let mut samples: Vec<f64> = pink
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let hp = v - prev_in + pole * prev_out;
            prev_in = v;
            prev_out = hp;
            let t = i as f64 / sample_rate;
            hp * (0.6 + 0.4 * (std::f64::consts::TAU * rate_hz * t + phase).sin())
        })
        .collect();

    let rms = (samples.iter().map(|v| v * v).sum::<f64>() / n.max(1) as f64).sqrt();
    if rms > 0.0 {
        samples.iter_mut().for_each(|v| *v *= 0.1 / rms);
    }
    Signal::new(samples, sample_rate).expect("positive sample rate")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n_signals: usize,
    pub duration_s: f64,
    pub conv_order: usize,
    pub cplx_order: usize,
    pub seed: u64,
    pub sample_rate: f64,
    /// Untimed fits run before measurement starts.
    pub warmup: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_signals: 5000,
            duration_s: 1.5,
            conv_order: 300,
            cplx_order: 150,
            seed: 0,
            sample_rate: 16000.0,
            warmup: 10,
        }
    }
}

impl BenchConfig {
    fn signal_len(&self) -> usize {
        (self.duration_s * self.sample_rate).round() as usize
    }

    /// The `i`-th benchmark input.
    pub fn signal(&self, i: usize) -> Signal {
        speech_shaped(
            self.signal_len(),
            self.sample_rate,
            self.seed.wrapping_add(i as u64),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodTiming {
    pub order: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n_signals: usize,
    pub duration_s: f64,
    pub conventional: MethodTiming,
    pub complex: MethodTiming,
    pub reduction_pct: f64,
    pub host: String,
}

fn host_descriptor() -> String {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{} ({} logical cpus, single-threaded run)",
        std::env::consts::ARCH,
        std::env::consts::OS,
        cpus
    )
}

fn summarize(order: usize, samples_ms: &[f64]) -> MethodTiming {
    let n = samples_ms.len() as f64;
    let mean = samples_ms.iter().sum::<f64>() / n;
    let var = samples_ms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    MethodTiming {
        order,
        mean_ms: mean,
        std_ms: var.sqrt(),
    }
}

/// Times both fits on the same inputs, alternating which runs first so
/// cache warmth does not favour either method.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n_signals == 0 {
        return Err(Error::Argument("benchmark needs at least one signal".into()));
    }
    let len = cfg.signal_len();
    if len <= cfg.conv_order.max(cfg.cplx_order) {
        return Err(Error::Argument(format!(
            "signals of {len} samples are too short for order {}",
            cfg.conv_order.max(cfg.cplx_order)
        )));
    }

    let time_conv = |x: &Signal| -> Result<f64> {
        let start = Instant::now();
        black_box(conventional_fdlp(black_box(x), cfg.conv_order)?);
        Ok(start.elapsed().as_secs_f64() * 1e3)
    };
    let time_cplx = |x: &Signal| -> Result<f64> {
        let start = Instant::now();
        black_box(complex_fdlp(black_box(x), cfg.cplx_order)?);
        Ok(start.elapsed().as_secs_f64() * 1e3)
    };

    for i in 0..cfg.warmup.min(cfg.n_signals) {
        let x = cfg.signal(i);
        time_conv(&x)?;
        time_cplx(&x)?;
    }

    let mut conv = Vec::with_capacity(cfg.n_signals);
    let mut cplx = Vec::with_capacity(cfg.n_signals);
    for i in 0..cfg.n_signals {
        let x = cfg.signal(i);
        if i % 2 == 0 {
            conv.push(time_conv(&x)?);
            cplx.push(time_cplx(&x)?);
        } else {
            cplx.push(time_cplx(&x)?);
            conv.push(time_conv(&x)?);
        }
    }

    let conventional = summarize(cfg.conv_order, &conv);
    let complex = summarize(cfg.cplx_order, &cplx);
    Ok(BenchReport {
        n_signals: cfg.n_signals,
        duration_s: cfg.duration_s,
        reduction_pct: 100.0 * (1.0 - complex.mean_ms / conventional.mean_ms),
        conventional,
        complex,
        host: host_descriptor(),
    })
}
