//! Self-checks behind `fdlp verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::speech_shaped;
use crate::cepstrum::{cepstral_recursion, cepstrum_oracle_fft};
use crate::dsp::{verify_fourier_magnitude_identity, verify_reflected_magnitude_identity, Signal, C64};
use crate::error::Result;
use crate::lp::{poles, LpModel};
use crate::models::conventional_fdlp;
use crate::spectrogram::{frame_signal, SpectrogramConfig};

pub const IDENTITY_TOL: f64 = 1e-12;
pub const CEPSTRUM_TOL: f64 = 1e-8;
pub const POLE_PAIR_TOL: f64 = 1e-6;
pub const COLA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check { name, passed, detail }
    }
}

/// Stable model of the given order with poles drawn uniformly inside the
/// disc of radius 0.9.
pub fn random_stable_model(order: usize, rng: &mut ChaCha8Rng) -> LpModel {
    // expand prod_i (1 - z_i w), w = z^{-1}
    let mut poly = vec![C64::new(1.0, 0.0)];
    for _ in 0..order {
        let z = C64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let mut next = poly.clone();
        next.push(C64::new(0.0, 0.0));
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] -= z * c;
        }
        poly = next;
    }
    LpModel::new(poly[1..].iter().map(|c| -c).collect(), rng.gen_range(0.1..3.0))
}

/// Random vector of length 64..=4096 with entries in [-1, 1); real when
/// `complex` is false.
pub fn random_vector(rng: &mut ChaCha8Rng, complex: bool) -> Vec<C64> {
    let n = rng.gen_range(64..=4096);
    (0..n)
        .map(|_| {
            let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
            C64::new(rng.gen_range(-1.0..1.0), im)
        })
        .collect()
}

/// Largest deviation of `check` over `count` random vectors.
pub fn identity_deviation(
    count: usize,
    complex: bool,
    seed: u64,
    check: fn(&[C64]) -> Result<f64>,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        worst = worst.max(check(&random_vector(&mut rng, complex))?);
    }
    Ok(worst)
}

/// Inverse and forward DFT magnitudes agree elementwise for real input and
/// after index reflection for complex input.
pub fn check_fourier_identity(seed: u64) -> Result<Check> {
    let real = identity_deviation(100, false, seed, verify_fourier_magnitude_identity)?;
    let cplx = identity_deviation(100, true, seed ^ 1, verify_reflected_magnitude_identity)?;
    Ok(Check::new(
        "fourier magnitude identity",
        real < IDENTITY_TOL && cplx < IDENTITY_TOL,
        format!("real max dev {real:.2e}, complex (reflected) max dev {cplx:.2e}"),
    ))
}

/// Largest |recursion - oracle| over the first `n_coeffs` coefficients of
/// `count` random stable models of order 1..=`max_order`.
pub fn cepstrum_deviation(count: usize, max_order: usize, n_coeffs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let order = rng.gen_range(1..=max_order);
        let m = random_stable_model(order, &mut rng);
        let fast = cepstral_recursion(&m, n_coeffs)?;
        let slow = cepstrum_oracle_fft(&m, 16384)?;
        for (a, b) in fast.c.iter().zip(&slow.c) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

pub fn check_cepstral_recursion(seed: u64) -> Result<Check> {
    let dev = cepstrum_deviation(100, 50, 100, seed)?;
    Ok(Check::new(
        "cepstral recursion vs FFT oracle",
        dev < CEPSTRUM_TOL,
        format!("max abs error {dev:.2e} over 100 models"),
    ))
}

/// Worst distance from a pole's conjugate to its nearest pole.
pub fn conjugate_pair_deviation(m: &LpModel) -> Result<f64> {
    let p = poles(m)?;
    Ok(p.iter()
        .map(|z| {
            p.iter()
                .map(|w| (w - z.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// Conventional models of real signals have real coefficients, so their
/// poles pair up under conjugation.
pub fn check_pole_symmetry(seed: u64) -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..5 {
        let x = speech_shaped(4000, 8000.0, seed.wrapping_add(i));
        worst = worst.max(conjugate_pair_deviation(&conventional_fdlp(&x, 40)?)?);
    }
    Ok(Check::new(
        "conventional pole conjugate symmetry",
        worst < POLE_PAIR_TOL,
        format!("max conjugate mismatch {worst:.2e}"),
    ))
}

/// Overlap-added analysis frames of a constant signal reproduce it.
pub fn check_cola() -> Result<Check> {
    let cfg = SpectrogramConfig::default();
    let mut worst = 0.0f64;
    for n in [8000, 24000, 51200, 96000] {
        let x = Signal::new(vec![1.0; n], cfg.sample_rate_hz)?;
        let mut acc = vec![0.0; n];
        for f in frame_signal(&x, &cfg)? {
            for (i, v) in f.samples.iter().enumerate() {
                if let Some(a) = acc.get_mut(f.start + i) {
                    *a += v;
                }
            }
        }
        worst = worst.max(acc.iter().map(|a| (a - 1.0).abs()).fold(0.0, f64::max));
    }
    Ok(Check::new(
        "window overlap-add",
        worst < COLA_TOL,
        format!("max deviation from unity {worst:.2e}"),
    ))
}

pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    Ok(vec![
        check_fourier_identity(seed)?,
        check_cepstral_recursion(seed)?,
        check_pole_symmetry(seed)?,
        check_cola()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all(11).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn random_models_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for order in [1, 7, 30] {
            let m = random_stable_model(order, &mut rng);
            assert_eq!(m.order(), order);
            assert!(poles(&m).unwrap().iter().all(|z| z.norm() < 0.9 + 1e-9));
        }
    }

    #[test]
    fn conjugate_mismatch_detects_complex_models() {
        let m = LpModel::new(vec![C64::new(0.0, 0.5)], 1.0);
        assert!(conjugate_pair_deviation(&m).unwrap() > 0.5);
    }
}
