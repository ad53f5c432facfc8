//! Autocorrelation-method linear prediction over complex sequences.
//!
//! The predictor follows `x[n] = sum_k alpha_k x[n-k] + G u[n]`, so the
//! inverse filter is `A(z) = 1 - sum_k alpha_k z^{-k}` and the model
//! response is `G^2 / |A(e^{j tau})|^2`. Real autocorrelations take a
//! real-arithmetic path and give coefficients with zero imaginary part.

use std::cell::RefCell;

use num_complex::ComplexFloat;
use realfft::RealFftPlanner;

use crate::dsp::{fft_in_place, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelDomain {
    Raw,
    ConventionalFdlp,
    ComplexFdlp,
}

/// All-pole model `G / A(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    /// Prediction coefficients `alpha_1..alpha_p`.
    pub coeffs: Vec<C64>,
    pub gain: f64,
    pub domain: ModelDomain,
    /// Length of the sequence the model was fitted to.
    pub source_len: usize,
    /// Physical duration (seconds) spanned by the full `[0, 2pi)` response.
    pub duration_s: f64,
    /// Set when the requested order exceeded the data support and was reduced.
    pub order_clamped: bool,
}

impl LpModel {
    /// A raw model with no source metadata.
    pub fn new(coeffs: Vec<C64>, gain: f64) -> Self {
        LpModel {
            coeffs,
            gain,
            domain: ModelDomain::Raw,
            source_len: 0,
            duration_s: 1.0,
            order_clamped: false,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Inverse filter taps `[1, -alpha_1, ..., -alpha_p]`.
    pub fn inverse_filter(&self) -> Vec<C64> {
        std::iter::once(C64::new(1.0, 0.0))
            .chain(self.coeffs.iter().map(|a| -a))
            .collect()
    }
}

/// Biased autocorrelation `r[0..=p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSequence {
    r: Vec<C64>,
}

impl AutocorrSequence {
    pub fn from_values(r: Vec<C64>) -> Result<Self> {
        let Some(r0) = r.first() else {
            return Err(Error::EmptyInput {
                op: "autocorrelation",
            });
        };
        if r0.im.abs() > 1e-9 * r0.re.abs().max(1.0) || r0.re < 0.0 {
            return Err(Error::Argument(format!(
                "r[0] must be real and non-negative, got {r0}"
            )));
        }
        Ok(AutocorrSequence { r })
    }

    pub fn values(&self) -> &[C64] {
        &self.r
    }

    pub fn max_lag(&self) -> usize {
        self.r.len() - 1
    }

    pub fn energy(&self) -> f64 {
        self.r[0].re
    }
}

/// Lags from which the FFT route beats the direct sums.
const FFT_MIN_LAG: usize = 48;

fn check_lag(n: usize, max_lag: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput { op: "autocorrelate" });
    }
    if max_lag >= n {
        return Err(Error::Argument(format!(
            "max lag {max_lag} must be below the sequence length {n}"
        )));
    }
    Ok(())
}

/// Smallest `2^a 3^b` not below `n`.
fn fast_len(n: usize) -> usize {
    let mut best = n.next_power_of_two();
    let mut p3 = 1;
    while p3 < best {
        let mut m = p3;
        while m < n {
            m *= 2;
        }
        best = best.min(m);
        p3 *= 3;
    }
    best
}

/// Autocorrelation as the inverse transform of the zero-padded power
/// spectrum; padding to `n + max_lag` keeps circular wrap out of the lags.
fn autocorrelate_fft(x: impl Iterator<Item = C64>, n: usize, max_lag: usize) -> Vec<C64> {
    let len = fast_len(n + max_lag);
    let mut buf: Vec<C64> = x.collect();
    buf.resize(len, C64::new(0.0, 0.0));
    fft_in_place(&mut buf, false);
    for v in buf.iter_mut() {
        *v = C64::new(v.norm_sqr(), 0.0);
    }
    fft_in_place(&mut buf, true);
    let scale = 1.0 / len as f64;
    buf.truncate(max_lag + 1);
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// `r[k] = sum_n x[n] conj(x[n-k])` for `k = 0..=max_lag`, no lag normalization.
pub fn autocorrelate(x: &[C64], max_lag: usize) -> Result<AutocorrSequence> {
    let n = x.len();
    check_lag(n, max_lag)?;
    let mut r: Vec<C64> = if max_lag >= FFT_MIN_LAG {
        autocorrelate_fft(x.iter().copied(), n, max_lag)
    } else {
        (0..=max_lag)
            .map(|k| {
                x[k..]
                    .iter()
                    .zip(&x[..n - k])
                    .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
            })
            .collect()
    };
    r[0].im = 0.0;
    Ok(AutocorrSequence { r })
}

thread_local! {
    static REAL_PLANNER: RefCell<RealFftPlanner<f64>> = RefCell::new(RealFftPlanner::new());
}

fn autocorrelate_real_fft(x: &[f64], max_lag: usize) -> Vec<f64> {
    let len = fast_len(x.len() + max_lag);
    let (forward, inverse) = REAL_PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(len), p.plan_fft_inverse(len))
    });
    let mut buf = x.to_vec();
    buf.resize(len, 0.0);
    let mut spectrum = forward.make_output_vec();
    forward
        .process(&mut buf, &mut spectrum)
        .expect("buffer lengths match the plan");
    for v in spectrum.iter_mut() {
        *v = C64::new(v.norm_sqr(), 0.0);
    }
    inverse
        .process(&mut spectrum, &mut buf)
        .expect("buffer lengths match the plan");
    let scale = 1.0 / len as f64;
    buf.truncate(max_lag + 1);
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// [`autocorrelate`] for real sequences, in real arithmetic.
pub fn autocorrelate_real(x: &[f64], max_lag: usize) -> Result<AutocorrSequence> {
    let n = x.len();
    check_lag(n, max_lag)?;
    let r = if max_lag >= FFT_MIN_LAG {
        autocorrelate_real_fft(x, max_lag)
            .into_iter()
            .map(|v| C64::new(v, 0.0))
            .collect()
    } else {
        (0..=max_lag)
            .map(|k| C64::new(x[k..].iter().zip(&x[..n - k]).map(|(a, b)| a * b).sum(), 0.0))
            .collect()
    };
    Ok(AutocorrSequence { r })
}

/// Full output of the Levinson-Durbin recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct LevinsonTrace {
    pub coeffs: Vec<C64>,
    /// Prediction error power after each order, `errors[0] = r[0]`.
    pub errors: Vec<f64>,
    /// Reflection coefficients `k_1..k_p`.
    pub reflection: Vec<C64>,
}

/// Levinson-Durbin recursion for a Hermitian Toeplitz system.
pub fn levinson_trace(r: &AutocorrSequence, order: usize) -> Result<LevinsonTrace> {
    let r = r.values();
    if order >= r.len() {
        return Err(Error::Argument(format!(
            "order {order} exceeds the autocorrelation max lag {}",
            r.len() - 1
        )));
    }
    let r0 = r[0].re;
    if !(r0 > 0.0) {
        return Err(Error::DegenerateSignal);
    }
    if r[..=order].iter().all(|v| v.im == 0.0) {
        let re: Vec<f64> = r[..=order].iter().map(|v| v.re).collect();
        return levinson_trace_real(&re, order);
    }

    let mut coeffs: Vec<C64> = Vec::with_capacity(order);
    let mut prev: Vec<C64> = Vec::with_capacity(order);
    let mut errors = Vec::with_capacity(order + 1);
    let mut reflection = Vec::with_capacity(order);
    let mut err = r0;
    errors.push(err);

    for m in 1..=order {
        let acc = coeffs
            .iter()
            .enumerate()
            .fold(r[m], |acc, (i, a)| acc - a * r[m - 1 - i]);
        let k = acc / err;

        prev.clear();
        prev.extend_from_slice(&coeffs);
        for i in 0..m - 1 {
            coeffs[i] = prev[i] - k * prev[m - 2 - i].conj();
        }
        coeffs.push(k);

        err *= 1.0 - k.norm_sqr();
        if !(err > 0.0) || !err.is_finite() {
            return Err(Error::IllConditioned { order: m, error: err });
        }
        errors.push(err);
        reflection.push(k);
    }

    Ok(LevinsonTrace {
        coeffs,
        errors,
        reflection,
    })
}

/// The recursion above in real arithmetic, for real autocorrelations.
fn levinson_trace_real(r: &[f64], order: usize) -> Result<LevinsonTrace> {
    let mut coeffs: Vec<f64> = Vec::with_capacity(order);
    let mut prev: Vec<f64> = Vec::with_capacity(order);
    let mut errors = Vec::with_capacity(order + 1);
    let mut reflection = Vec::with_capacity(order);
    let mut err = r[0];
    errors.push(err);

    for m in 1..=order {
        let dot: f64 = coeffs.iter().zip(r[..m].iter().rev()).map(|(a, v)| a * v).sum();
        let k = (r[m] - dot) / err;

        prev.clear();
        prev.extend_from_slice(&coeffs);
        for i in 0..m - 1 {
            coeffs[i] = prev[i] - k * prev[m - 2 - i];
        }
        coeffs.push(k);

        err *= 1.0 - k * k;
        if !(err > 0.0) || !err.is_finite() {
            return Err(Error::IllConditioned { order: m, error: err });
        }
        errors.push(err);
        reflection.push(C64::new(k, 0.0));
    }

    Ok(LevinsonTrace {
        coeffs: coeffs.into_iter().map(|a| C64::new(a, 0.0)).collect(),
        errors,
        reflection,
    })
}

/// Solves the normal equations for an order-`order` predictor. The gain is
/// the square root of the final prediction error.
pub fn levinson(r: &AutocorrSequence, order: usize) -> Result<LpModel> {
    let trace = levinson_trace(r, order)?;
    let gain = trace.errors[order].sqrt();
    Ok(LpModel::new(trace.coeffs, gain))
}

/// `G^2 / |A(e^{j tau})|^2` on `n_points` uniform samples of `tau` in `[0, 2pi)`.
pub fn lp_power_response(m: &LpModel, n_points: usize) -> Result<Vec<f64>> {
    if n_points < m.order() + 1 {
        return Err(Error::Argument(format!(
            "response grid of {n_points} points is shorter than order {} + 1",
            m.order()
        )));
    }
    let mut buf = m.inverse_filter();
    buf.resize(n_points, C64::new(0.0, 0.0));
    fft_in_place(&mut buf, false);
    let g2 = m.gain * m.gain;
    buf.iter()
        .enumerate()
        .map(|(i, a)| {
            let v = g2 / a.norm_sqr();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Instability { index: i })
            }
        })
        .collect()
}

const ABERTH_MAX_ITER: usize = 500;
const POLE_RESIDUAL_TOL: f64 = 1e-10;

/// Evaluates `p(z)` and `p'(z)` for a polynomial with coefficients in
/// descending powers.
fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = coeffs[0];
    let mut dp = C64::new(0.0, 0.0);
    for c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Backward-error residual `|p(z)| / sum_k |c_k| |z|^k`.
fn relative_residual(coeffs: &[C64], z: C64) -> f64 {
    let az = z.abs();
    let (p, _) = horner_with_derivative(coeffs, z);
    let scale = coeffs.iter().fold(0.0, |acc, c| acc * az + c.abs());
    p.abs() / scale
}

/// Roots of `z^p - alpha_1 z^{p-1} - ... - alpha_p`, the model poles, by
/// Aberth-Ehrlich simultaneous iteration. Residuals are relative backward
/// errors.
pub fn poles(m: &LpModel) -> Result<Vec<C64>> {
    let p = m.order();
    if p == 0 {
        return Err(Error::Argument("pole extraction needs order >= 1".into()));
    }
    let poly = m.inverse_filter();
    if p == 1 {
        return Ok(vec![m.coeffs[0]]);
    }

    let radius = poly[p].abs().powf(1.0 / p as f64).clamp(0.1, 2.0);
    let mut roots: Vec<C64> = (0..p)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / p as f64 + 0.4;
            C64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..p {
            let z = roots[i];
            let (v, dv) = horner_with_derivative(&poly, z);
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / dv;
            let repulsion: C64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, zj)| (z - zj).inv())
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                roots[i] = z - step;
                max_step = max_step.max(step.abs() / z.abs().max(1.0));
            }
        }
        if max_step < 1e-14 {
            break;
        }
    }

    let residual = roots
        .iter()
        .map(|&z| relative_residual(&poly, z))
        .fold(0.0, f64::max);
    if residual.is_finite() && residual < POLE_RESIDUAL_TOL {
        Ok(roots)
    } else {
        Err(Error::NonConvergence {
            iterations: ABERTH_MAX_ITER,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Direct double sum, no shortcuts.
    fn naive_autocorr(x: &[C64], max_lag: usize) -> Vec<C64> {
        (0..=max_lag)
            .map(|k| {
                let mut acc = c(0.0, 0.0);
                for n in k..x.len() {
                    acc += x[n] * x[n - k].conj();
                }
                acc
            })
            .collect()
    }

    #[test]
    fn autocorrelation_paths_agree_with_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for (n, lag) in [(10, 9), (100, 47), (100, 48), (1000, 300), (777, 150)] {
            let x: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let want = naive_autocorr(&x, lag);
            let got = autocorrelate(&x, lag).unwrap();
            let scale = want[0].re;
            for (a, b) in got.values().iter().zip(&want) {
                assert!((a - b).norm() < 1e-12 * scale, "n={n} lag={lag}");
            }

            let xr: Vec<f64> = x.iter().map(|v| v.re).collect();
            let want = naive_autocorr(&xr.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>(), lag);
            let got = autocorrelate_real(&xr, lag).unwrap();
            for (a, b) in got.values().iter().zip(&want) {
                assert!((a - b).norm() < 1e-12 * want[0].re, "real n={n} lag={lag}");
                assert_eq!(a.im, 0.0);
            }
        }
        assert!(autocorrelate_real(&[], 0).is_err());
        assert!(autocorrelate_real(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn fast_lengths() {
        assert_eq!(fast_len(1), 1);
        assert_eq!(fast_len(5), 6);
        assert_eq!(fast_len(24300), 24576);
        for n in [7, 100, 1000, 12345] {
            let m = fast_len(n);
            assert!(m >= n);
            let mut k = m;
            while k % 2 == 0 { k /= 2; }
            while k % 3 == 0 { k /= 3; }
            assert_eq!(k, 1);
        }
    }

    fn real_r(values: &[f64]) -> AutocorrSequence {
        AutocorrSequence::from_values(values.iter().map(|&v| c(v, 0.0)).collect()).unwrap()
    }

    fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    /// Dense complex solve of `R alpha = r[1..]` with `R[i][k] = r[i-k]`.
    fn normal_equation_oracle(r: &[C64], order: usize) -> Vec<C64> {
        let lag = |d: isize| {
            if d >= 0 {
                r[d as usize]
            } else {
                r[(-d) as usize].conj()
            }
        };
        let mat = nalgebra::DMatrix::from_fn(order, order, |i, k| lag(i as isize - k as isize));
        let rhs = nalgebra::DVector::from_fn(order, |i, _| r[i + 1]);
        let sol = mat.lu().solve(&rhs).expect("singular system");
        sol.iter().copied().collect()
    }

    #[test]
    fn autocorrelate_small_cases() {
        let r = autocorrelate(&[c(1.0, 0.0); 4], 1).unwrap();
        assert_eq!(r.values(), &[c(4.0, 0.0), c(3.0, 0.0)]);
        let r = autocorrelate(&[c(0.0, 1.0); 2], 1).unwrap();
        assert_eq!(r.values()[1], c(1.0, 0.0));
        assert!(autocorrelate(&[c(1.0, 0.0); 4], 4).is_err());
        assert!(autocorrelate(&[], 0).is_err());
    }

    #[test]
    fn autocorrelate_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_complex(128, &mut rng);
        let p = 20;
        let r = autocorrelate(&x, p).unwrap();
        for k in 0..=p {
            let mut brute = c(0.0, 0.0);
            for n in 0..x.len() {
                if n >= k {
                    brute += x[n] * x[n - k].conj();
                }
            }
            assert!((brute - r.values()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn levinson_first_order_by_hand() {
        let m = levinson(&real_r(&[1.0, 0.5]), 1).unwrap();
        assert!((m.coeffs[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m.gain - 0.75f64.sqrt()).abs() < 1e-15);

        let white = levinson(&real_r(&[1.0, 0.0]), 1).unwrap();
        assert_eq!(white.coeffs[0], c(0.0, 0.0));
        assert_eq!(white.gain, 1.0);
    }

    #[test]
    fn levinson_errors() {
        assert!(matches!(
            levinson(&real_r(&[0.0, 0.0]), 1),
            Err(Error::DegenerateSignal)
        ));
        assert!(matches!(
            levinson(&real_r(&[1.0, 1.0, 1.0]), 2),
            Err(Error::IllConditioned { order: 1, .. })
        ));
        assert!(levinson(&real_r(&[1.0, 0.5]), 2).is_err());
    }

    #[test]
    fn levinson_recovers_ar2_process() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let mut x = vec![0.0f64; n];
        for i in 0..n {
            let u: f64 = rng.gen_range(-1.0..1.0);
            let a1 = if i >= 1 { 0.9 * x[i - 1] } else { 0.0 };
            let a2 = if i >= 2 { -0.2 * x[i - 2] } else { 0.0 };
            x[i] = a1 + a2 + u;
        }
        let xc: Vec<C64> = x.iter().map(|&v| c(v, 0.0)).collect();
        let r = autocorrelate(&xc, 2).unwrap();
        let m = levinson(&r, 2).unwrap();
        assert!((m.coeffs[0].re - 0.9).abs() < 1e-2);
        assert!((m.coeffs[1].re + 0.2).abs() < 1e-2);
        let dense = normal_equation_oracle(r.values(), 2);
        for (a, b) in m.coeffs.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn levinson_matches_dense_solve_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for order in [1usize, 5, 30, 100] {
            let x = random_complex(4 * order + 50, &mut rng);
            let r = autocorrelate(&x, order).unwrap();
            let m = levinson(&r, order).unwrap();
            let dense = normal_equation_oracle(r.values(), order);
            let err = m
                .coeffs
                .iter()
                .zip(&dense)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "order {order}: {err}");
        }
    }

    #[test]
    fn levinson_matches_dense_solve_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for order in [1usize, 5, 30, 100] {
            let x: Vec<f64> = (0..4 * order + 50).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = autocorrelate_real(&x, order).unwrap();
            let m = levinson(&r, order).unwrap();
            let dense = normal_equation_oracle(r.values(), order);
            let err = m
                .coeffs
                .iter()
                .zip(&dense)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "order {order}: {err}");
            assert!(m.coeffs.iter().all(|a| a.im == 0.0));
        }
    }

    #[test]
    fn power_response_closed_forms() {
        let flat = lp_power_response(&LpModel::new(vec![], 2.0), 8).unwrap();
        assert!(flat.iter().all(|&v| (v - 4.0).abs() < 1e-15));

        let pole = LpModel::new(vec![c(0.5, 0.0)], 1.0);
        let resp = lp_power_response(&pole, 64).unwrap();
        let (imax, vmax) = resp
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert_eq!(imax, 0);
        assert!((vmax - 4.0).abs() < 1e-12);

        assert!(lp_power_response(&pole, 1).is_err());
    }

    #[test]
    fn power_response_reports_unit_circle_zero() {
        // A(z) = 1 - z^{-1} vanishes at tau = 0
        let m = LpModel::new(vec![c(1.0, 0.0)], 1.0);
        assert!(matches!(
            lp_power_response(&m, 16),
            Err(Error::Instability { index: 0 })
        ));
    }

    #[test]
    fn power_response_matches_horner() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let x = random_complex(400, &mut rng);
        let m = levinson(&autocorrelate(&x, 12).unwrap(), 12).unwrap();
        let n = 4096;
        let resp = lp_power_response(&m, n).unwrap();
        for (i, v) in resp.iter().enumerate() {
            let zinv = C64::from_polar(1.0, -2.0 * PI * i as f64 / n as f64);
            // A(z) = sum_k a_k z^{-k}, Horner in z^{-1}
            let a = m
                .inverse_filter()
                .iter()
                .rev()
                .fold(c(0.0, 0.0), |acc, tap| acc * zinv + tap);
            let oracle = m.gain * m.gain / a.norm_sqr();
            assert!(((v - oracle) / oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn poles_of_simple_models() {
        let single = poles(&LpModel::new(vec![c(0.5, 0.0)], 1.0)).unwrap();
        assert!((single[0] - c(0.5, 0.0)).norm() < 1e-15);

        // (z - p)(z - conj p) = z^2 - 2 Re(p) z + |p|^2
        let p = C64::from_polar(0.8, PI / 4.0);
        let m = LpModel::new(vec![c(2.0 * p.re, 0.0), c(-p.norm_sqr(), 0.0)], 1.0);
        let mut roots = poles(&m).unwrap();
        roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((roots[0] - p.conj()).norm() < 1e-8);
        assert!((roots[1] - p).norm() < 1e-8);

        assert!(poles(&LpModel::new(vec![], 1.0)).is_err());
    }

    #[test]
    fn poles_of_fitted_model_are_inside_unit_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let x = random_complex(2000, &mut rng);
        let m = levinson(&autocorrelate(&x, 60).unwrap(), 60).unwrap();
        let roots = poles(&m).unwrap();
        assert_eq!(roots.len(), 60);
        assert!(roots.iter().all(|z| z.norm() < 1.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn signal() -> impl Strategy<Value = Vec<C64>> {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64..256)
                .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn prediction_error_is_non_increasing(x in signal()) {
                let r = autocorrelate(&x, 30).unwrap();
                let t = levinson_trace(&r, 30).unwrap();
                for w in t.errors.windows(2) {
                    prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
                }
            }

            #[test]
            fn reflection_coefficients_inside_unit_disk(x in signal()) {
                let r = autocorrelate(&x, 30).unwrap();
                let t = levinson_trace(&r, 30).unwrap();
                prop_assert!(t.reflection.iter().all(|k| k.norm() < 1.0));
            }

            #[test]
            fn real_input_gives_real_coefficients(x in prop::collection::vec(-1.0f64..1.0, 64..256)) {
                let xc: Vec<C64> = x.iter().map(|&v| c(v, 0.0)).collect();
                let m = levinson(&autocorrelate(&xc, 20).unwrap(), 20).unwrap();
                prop_assert!(m.coeffs.iter().all(|a| a.im.abs() < 1e-12));
            }

            #[test]
            fn response_mean_tracks_energy(x in signal()) {
                let r = autocorrelate(&x, 16).unwrap();
                let m = levinson(&r, 16).unwrap();
                let resp = lp_power_response(&m, 1024).unwrap();
                let mean = resp.iter().sum::<f64>() / resp.len() as f64;
                let ratio = mean / r.energy();
                prop_assert!(ratio > 0.5 && ratio < 2.0);
            }
        }
    }
}
