//! Sub-band FDLP-spectrogram.
//!
//! Each 1.5 s Hann-windowed frame is taken to the frequency domain, split
//! into mel-spaced cosine-tapered bands, and every band is fitted with a
//! complex FDLP model whose time response is the band's power envelope.
//! Frame envelopes are overlap-added in the linear power domain, logged,
//! and averaged down to the output frame rate.
//!
//! The first and last analysis frames use a half-flat window (flat towards
//! the signal edge) so every sample carries full weight; interior frames use
//! the periodic Hann window.

use rayon::prelude::*;

use crate::dsp::{hanning, idft_real, ComplexSequence, Signal, WindowMode, C64};
use crate::error::{Error, Result};
use crate::lp::{autocorrelate, levinson, AutocorrSequence, lp_power_response, LpModel, ModelDomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapDomain {
    /// Overlap-add power envelopes, then take the log.
    LinearPower,
    /// Overlap-add log envelopes.
    LogPower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrogramConfig {
    pub n_bands: usize,
    /// Per-band model order.
    pub lp_order: usize,
    pub window_s: f64,
    pub hop_s: f64,
    pub frame_rate_hz: f64,
    pub sample_rate_hz: f64,
    pub overlap: OverlapDomain,
}

impl Default for SpectrogramConfig {
    fn default() -> Self {
        SpectrogramConfig {
            n_bands: 50,
            lp_order: 80,
            window_s: 1.5,
            hop_s: 0.75,
            frame_rate_hz: 100.0,
            sample_rate_hz: 16000.0,
            overlap: OverlapDomain::LinearPower,
        }
    }
}

impl SpectrogramConfig {
    pub fn with_sample_rate(sample_rate_hz: f64) -> Self {
        SpectrogramConfig {
            sample_rate_hz,
            ..Self::default()
        }
    }

    pub fn window_len(&self) -> usize {
        (self.window_s * self.sample_rate_hz).round() as usize
    }

    pub fn hop_len(&self) -> usize {
        (self.hop_s * self.sample_rate_hz).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if self.n_bands == 0 {
            return bad("need at least one band".into());
        }
        if !(self.sample_rate_hz > 0.0 && self.frame_rate_hz > 0.0) {
            return bad("sample and frame rates must be positive".into());
        }
        let (w, h) = (self.window_len(), self.hop_len());
        if w < 2 || h == 0 {
            return bad(format!("window of {w} samples with hop {h} is too short"));
        }
        // a hop equal to the window leaves samples where every Hann weight is zero
        if h >= w {
            return bad(format!("hop ({h} samples) must be shorter than the window ({w})"));
        }
        if self.lp_order * self.n_bands >= w {
            return bad(format!(
                "order {} x {} bands exceeds the {w}-sample window",
                self.lp_order, self.n_bands
            ));
        }
        Ok(())
    }

    /// Output frame count, `ceil(duration * frame_rate)`.
    pub fn n_output_frames(&self, n_samples: usize) -> usize {
        let exact = n_samples as f64 * self.frame_rate_hz / self.sample_rate_hz;
        (exact - 1e-9).ceil().max(0.0) as usize
    }
}

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Weights of one band over the contiguous bin range `start..start + len`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandWindow {
    pub start: usize,
    pub weights: Vec<f64>,
    pub center_hz: f64,
}

impl BandWindow {
    pub fn support(&self) -> usize {
        self.weights.len()
    }
}

/// Hann-shaped bands on a mel-uniform grid over the one-sided spectrum of
/// `n_bins` bins (DC to Nyquist). Neighbours overlap by half, the outer
/// halves of the first and last bands are flat, so weights sum to one at
/// every bin.
pub fn mel_band_windows(cfg: &SpectrogramConfig, n_bins: usize) -> Result<Vec<BandWindow>> {
    let bands = cfg.n_bands;
    if bands == 0 {
        return Err(Error::Argument("need at least one band".into()));
    }
    if n_bins < 2 * bands {
        return Err(Error::Argument(format!(
            "{n_bins} bins cannot hold {bands} bands (need {})",
            2 * bands
        )));
    }
    let nyquist = cfg.sample_rate_hz / 2.0;
    let step = hz_to_mel(nyquist) / (bands + 1) as f64;
    let bin_mel = |k: usize| hz_to_mel(k as f64 * nyquist / (n_bins - 1) as f64);

    (0..bands)
        .map(|b| {
            let lo = b as f64 * step;
            let center = lo + step;
            let weight = |k: usize| {
                let m = bin_mel(k);
                if (b == 0 && m <= center) || (b == bands - 1 && m >= center) {
                    return 1.0;
                }
                let u = (m - lo) / (2.0 * step);
                if u <= 0.0 || u >= 1.0 {
                    0.0
                } else {
                    let s = (std::f64::consts::PI * u).sin();
                    s * s
                }
            };
            let first = (0..n_bins).find(|&k| weight(k) > 0.0);
            let Some(start) = first else {
                return Err(Error::Argument(format!("band {b} covers no bins")));
            };
            let end = (start..n_bins).take_while(|&k| weight(k) > 0.0).last().unwrap_or(start);
            Ok(BandWindow {
                start,
                weights: (start..=end).map(weight).collect(),
                center_hz: mel_to_hz(center),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// First sample of the frame in the source signal.
    pub start: usize,
    /// Windowed samples, zero-padded past the end of the signal.
    pub samples: Vec<f64>,
    pub window: Vec<f64>,
}

/// `1 + ceil((len - window) / hop)` frames (at least one) of windowed
/// samples; the last frame is zero-padded.
pub fn frame_signal(x: &Signal, cfg: &SpectrogramConfig) -> Result<Vec<Frame>> {
    if x.is_empty() {
        return Err(Error::EmptyInput { op: "frame_signal" });
    }
    cfg.validate()?;
    let (w, h, n) = (cfg.window_len(), cfg.hop_len(), x.len());
    let n_frames = 1 + n.saturating_sub(w).div_ceil(h);
    let hann = hanning(w, WindowMode::Periodic)?;
    let half = w / 2;

    Ok((0..n_frames)
        .map(|f| {
            let start = f * h;
            let mut window = hann.clone();
            if f == 0 {
                window[..half].fill(1.0);
            }
            if f == n_frames - 1 {
                window[half..].fill(1.0);
            }
            let samples = (0..w)
                .map(|i| x.samples().get(start + i).map_or(0.0, |s| s * window[i]))
                .collect();
            Frame {
                start,
                samples,
                window,
            }
        })
        .collect())
}

/// White-noise floor added at lag 0, relative to the band energy. Zero-padded
/// tail frames and digital silence give envelopes with exact zeros, which an
/// all-pole fit cannot reach; the floor caps the dynamic range near 60 dB.
pub const BAND_NOISE_FLOOR: f64 = 1e-6;

/// Complex FDLP of one band: linear prediction over the band-weighted
/// one-sided inverse-DFT coefficients of a frame. Orders at or above the
/// band support are clamped to `support - 1` and flagged on the model.
pub fn band_complex_fdlp(
    spectrum: &ComplexSequence,
    band: &BandWindow,
    order: usize,
    frame_duration_s: f64,
) -> Result<LpModel> {
    let end = band.start + band.support();
    if end > spectrum.len() {
        return Err(Error::Argument(format!(
            "band bins {}..{end} exceed the {}-point spectrum",
            band.start,
            spectrum.len()
        )));
    }
    let seq: Vec<C64> = spectrum.values[band.start..end]
        .iter()
        .zip(&band.weights)
        .map(|(v, w)| v * w)
        .collect();
    let clamped = order >= seq.len();
    let order = order.min(seq.len().saturating_sub(1));
    let mut r = autocorrelate(&seq, order)?.values().to_vec();
    r[0] *= 1.0 + BAND_NOISE_FLOOR;
    let mut model = levinson(&AutocorrSequence::from_values(r)?, order)?;
    model.domain = ModelDomain::ComplexFdlp;
    model.source_len = spectrum.len();
    model.duration_s = frame_duration_s;
    model.order_clamped = clamped;
    Ok(model)
}

/// Frames x bands log-power features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    /// Row-major, `n_frames * n_bands`.
    pub data: Vec<f64>,
    pub n_frames: usize,
    pub n_bands: usize,
    pub frame_rate_hz: f64,
    pub sample_rate_hz: f64,
    pub band_centers_hz: Vec<f64>,
    pub duration_s: f64,
    pub source: Option<String>,
}

impl FeatureMatrix {
    pub fn get(&self, frame: usize, band: usize) -> f64 {
        self.data[frame * self.n_bands + band]
    }

    pub fn row(&self, frame: usize) -> &[f64] {
        &self.data[frame * self.n_bands..(frame + 1) * self.n_bands]
    }

    pub fn column(&self, band: usize) -> Vec<f64> {
        (0..self.n_frames).map(|f| self.get(f, band)).collect()
    }
}

/// Envelopes of all bands of one frame, each `window_len` points long.
fn frame_envelopes(
    frame: &Frame,
    bands: &[BandWindow],
    cfg: &SpectrogramConfig,
) -> Result<Vec<Vec<f64>>> {
    let w = frame.samples.len();
    let spectrum = idft_real(&frame.samples)?;
    bands
        .par_iter()
        .map(|band| {
            let model = band_complex_fdlp(&spectrum, band, cfg.lp_order, cfg.window_s)?;
            let response = lp_power_response(&model, w)?;
            Ok(response.into_iter().map(|v| v / w as f64).collect())
        })
        .collect()
}

/// FDLP-spectrogram of `x`: `ceil(duration * frame_rate)` frames by
/// `n_bands` natural-log power features.
pub fn fdlp_spectrogram(x: &Signal, cfg: &SpectrogramConfig) -> Result<FeatureMatrix> {
    cfg.validate()?;
    if (x.sample_rate() - cfg.sample_rate_hz).abs() > 1e-9 * cfg.sample_rate_hz {
        return Err(Error::Argument(format!(
            "signal rate {} Hz does not match configured {} Hz",
            x.sample_rate(),
            cfg.sample_rate_hz
        )));
    }
    let frames = frame_signal(x, cfg)?;
    let w = cfg.window_len();
    let bands = mel_band_windows(cfg, w / 2 + 1)?;
    let (n, n_bands) = (x.len(), bands.len());

    let mut acc = vec![0.0f64; n_bands * n];
    let mut weight = vec![0.0f64; n];
    // bounded batches keep memory flat; accumulation order is fixed
    let batch = rayon::current_num_threads().max(1);
    for chunk in frames.chunks(batch) {
        let envelopes: Vec<Vec<Vec<f64>>> = chunk
            .par_iter()
            .map(|frame| frame_envelopes(frame, &bands, cfg))
            .collect::<Result<_>>()?;
        for (frame, envs) in chunk.iter().zip(&envelopes) {
            let span = w.min(n - frame.start);
            for i in 0..span {
                let w2 = frame.window[i] * frame.window[i];
                let g = frame.start + i;
                weight[g] += w2;
                for (b, env) in envs.iter().enumerate() {
                    acc[b * n + g] += match cfg.overlap {
                        OverlapDomain::LinearPower => env[i],
                        OverlapDomain::LogPower if w2 > 0.0 => w2 * (env[i] / w2).ln(),
                        OverlapDomain::LogPower => 0.0,
                    };
                }
            }
        }
    }

    let n_out = cfg.n_output_frames(n);
    let per_frame = cfg.sample_rate_hz / cfg.frame_rate_hz;
    let mut data = vec![0.0; n_out * n_bands];
    for f in 0..n_out {
        let lo = ((f as f64 * per_frame).round() as usize).min(n);
        let hi = (((f + 1) as f64 * per_frame).round() as usize).min(n).max(lo + 1);
        for b in 0..n_bands {
            let sum: f64 = (lo..hi)
                .map(|g| {
                    let v = acc[b * n + g] / weight[g];
                    match cfg.overlap {
                        OverlapDomain::LinearPower => v.ln(),
                        OverlapDomain::LogPower => v,
                    }
                })
                .sum();
            let v = sum / (hi - lo) as f64;
            if !v.is_finite() {
                return Err(Error::Numeric { frame: f, band: b });
            }
            data[f * n_bands + b] = v;
        }
    }

    Ok(FeatureMatrix {
        data,
        n_frames: n_out,
        n_bands,
        frame_rate_hz: cfg.frame_rate_hz,
        sample_rate_hz: cfg.sample_rate_hz,
        band_centers_hz: bands.iter().map(|b| b.center_hz).collect(),
        duration_s: x.duration_s(),
        source: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::{synth_am, AmSignalSpec, Domain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tone(freq: f64, fs: f64, n: usize, amp: f64) -> Signal {
        Signal::new(
            (0..n).map(|i| amp * (2.0 * PI * freq * i as f64 / fs).sin()).collect(),
            fs,
        )
        .unwrap()
    }

    fn noise(n: usize, fs: f64, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Signal::new((0..n).map(|_| rng.gen_range(-0.1..0.1)).collect(), fs).unwrap()
    }

    fn peaks(v: &[f64]) -> usize {
        (1..v.len() - 1).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).count()
    }

    #[test]
    fn config_validation() {
        assert!(SpectrogramConfig::default().validate().is_ok());
        let bad_hop = SpectrogramConfig {
            hop_s: 1.5,
            ..Default::default()
        };
        assert!(bad_hop.validate().is_err());
        let too_many = SpectrogramConfig {
            lp_order: 500,
            ..Default::default()
        };
        assert!(too_many.validate().is_err());
        let no_bands = SpectrogramConfig {
            n_bands: 0,
            ..Default::default()
        };
        assert!(no_bands.validate().is_err());
    }

    #[test]
    fn single_band_covers_everything() {
        let cfg = SpectrogramConfig {
            n_bands: 1,
            ..Default::default()
        };
        let bands = mel_band_windows(&cfg, 101).unwrap();
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].start, 0);
        assert_eq!(bands[0].support(), 101);
        assert!(bands[0].weights.iter().all(|&w| w == 1.0));
    }

    #[test]
    fn default_bands_partition_the_spectrum() {
        let cfg = SpectrogramConfig::default();
        let n_bins = cfg.window_len() / 2 + 1;
        let bands = mel_band_windows(&cfg, n_bins).unwrap();
        assert_eq!(bands.len(), 50);
        let mut total = vec![0.0; n_bins];
        for b in &bands {
            for (i, w) in b.weights.iter().enumerate() {
                total[b.start + i] += w;
            }
        }
        assert!(total.iter().all(|&t| (0.5..=1.5).contains(&t)));
        assert!(bands.windows(2).all(|p| p[0].center_hz < p[1].center_hz));
        assert!(bands.iter().all(|b| b.support() > cfg.lp_order));
        assert!(mel_band_windows(&cfg, 99).is_err());
    }

    #[test]
    fn frame_counts() {
        let cfg = SpectrogramConfig::default();
        let fs = cfg.sample_rate_hz;
        let frames = |secs: f64| {
            frame_signal(&noise((secs * fs) as usize, fs, 1), &cfg).unwrap()
        };
        assert_eq!(frames(3.0).len(), 3);
        let tail = frames(3.2);
        assert_eq!(tail.len(), 4);
        assert_eq!(tail[3].start, 36000);
        assert!(tail[3].samples[51200 - 36000..].iter().all(|&v| v == 0.0));
        let short = frames(1.4);
        assert_eq!(short.len(), 1);
        assert!(short[0].samples[22400..].iter().all(|&v| v == 0.0));
        assert!(frame_signal(&Signal::new(vec![], fs).unwrap(), &cfg).is_err());
    }

    #[test]
    fn frames_overlap_add_to_constant() {
        let cfg = SpectrogramConfig::default();
        let n = 80_000;
        let x = Signal::new(vec![0.25; n], cfg.sample_rate_hz).unwrap();
        let frames = frame_signal(&x, &cfg).unwrap();
        let mut acc = vec![0.0; n];
        for fr in &frames {
            for (i, v) in fr.samples.iter().enumerate() {
                if fr.start + i < n {
                    acc[fr.start + i] += v;
                }
            }
        }
        assert!(acc.iter().all(|v| (v - 0.25).abs() < 1e-12));
    }

    fn one_frame_spectrum(x: &Signal) -> ComplexSequence {
        idft_real(x.samples()).unwrap()
    }

    #[test]
    fn tone_energy_stays_in_its_band() {
        let cfg = SpectrogramConfig::default();
        let w = cfg.window_len();
        let bands = mel_band_windows(&cfg, w / 2 + 1).unwrap();
        let freq = 1000.0;
        let hit = bands.iter().position(|b| b.center_hz > freq).unwrap();
        let x = tone(bands[hit].center_hz, cfg.sample_rate_hz, w, 0.5);
        let spec = one_frame_spectrum(&x);
        let mean_env = |b: usize| {
            let m = band_complex_fdlp(&spec, &bands[b], cfg.lp_order, cfg.window_s).unwrap();
            let r = lp_power_response(&m, w).unwrap();
            r.iter().sum::<f64>() / w as f64
        };
        let main = mean_env(hit);
        let env = {
            let m = band_complex_fdlp(&spec, &bands[hit], cfg.lp_order, cfg.window_s).unwrap();
            lp_power_response(&m, w).unwrap()
        };
        let (lo, hi) = (w / 10, w - w / 10);
        let max = env[lo..hi].iter().cloned().fold(f64::MIN, f64::max);
        let min = env[lo..hi].iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 1.1, "band envelope not flat: {max} / {min}");
        for b in (0..bands.len()).filter(|&b| b.abs_diff(hit) >= 2) {
            assert!(mean_env(b) < 0.01 * main, "band {b}");
        }
    }

    #[test]
    fn am_band_shows_modulation_cycles() {
        let cfg = SpectrogramConfig::default();
        let w = cfg.window_len();
        let bands = mel_band_windows(&cfg, w / 2 + 1).unwrap();
        let spec = AmSignalSpec {
            sample_rate: cfg.sample_rate_hz,
            ..AmSignalSpec::single(1000.0, 5.0, 0.3, 0.0, cfg.window_s)
        };
        let x = synth_am(&spec).unwrap();
        let spectrum = one_frame_spectrum(&x);
        // bins are sr / w apart, so 1 kHz sits at bin 1500
        let weight_at = |b: &BandWindow, k: usize| {
            k.checked_sub(b.start).and_then(|i| b.weights.get(i)).copied().unwrap_or(0.0)
        };
        let hit = (0..bands.len())
            .max_by(|&a, &b| weight_at(&bands[a], 1500).total_cmp(&weight_at(&bands[b], 1500)))
            .unwrap();
        let m = band_complex_fdlp(&spectrum, &bands[hit], cfg.lp_order, cfg.window_s).unwrap();
        let env = lp_power_response(&m, w).unwrap();
        // 5 Hz over 1.5 s
        assert_eq!(peaks(&env), 8, "band {hit}");
    }

    #[test]
    fn zero_frame_is_degenerate_and_narrow_band_clamps() {
        let spectrum = ComplexSequence::new(vec![C64::new(0.0, 0.0); 64], Domain::Frequency);
        let band = BandWindow {
            start: 4,
            weights: vec![1.0; 16],
            center_hz: 0.0,
        };
        assert!(matches!(
            band_complex_fdlp(&spectrum, &band, 8, 1.0),
            Err(Error::DegenerateSignal)
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let busy = ComplexSequence::new(
            (0..64).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
            Domain::Frequency,
        );
        let m = band_complex_fdlp(&busy, &band, 40, 1.0).unwrap();
        assert!(m.order_clamped);
        assert_eq!(m.order(), 15);
    }

    #[test]
    fn default_shape_for_one_and_a_half_seconds() {
        let cfg = SpectrogramConfig::default();
        let x = noise(24000, cfg.sample_rate_hz, 4);
        let f = fdlp_spectrogram(&x, &cfg).unwrap();
        assert_eq!((f.n_frames, f.n_bands), (150, 50));
        assert!(f.data.iter().all(|v| v.is_finite()));
        assert_eq!((cfg.n_bands, cfg.lp_order), (50, 80));
    }

    #[test]
    fn shape_contract_over_durations() {
        let cfg = SpectrogramConfig {
            n_bands: 8,
            lp_order: 20,
            ..Default::default()
        };
        for secs in [0.5, 1.234, 2.0, 3.3] {
            let n = (secs * cfg.sample_rate_hz) as usize;
            let f = fdlp_spectrogram(&noise(n, cfg.sample_rate_hz, 5), &cfg).unwrap();
            let expected = (n as f64 / cfg.sample_rate_hz * 100.0 - 1e-9).ceil() as usize;
            assert_eq!(f.n_frames, expected, "{secs} s");
        }
    }

    #[test]
    fn rate_mismatch_is_rejected() {
        let cfg = SpectrogramConfig::default();
        let x = noise(24000, 8000.0, 6);
        assert!(fdlp_spectrogram(&x, &cfg).is_err());
    }

    #[test]
    fn stationary_noise_gives_steady_features() {
        let cfg = SpectrogramConfig::default();
        let x = noise(64000, cfg.sample_rate_hz, 7);
        let f = fdlp_spectrogram(&x, &cfg).unwrap();
        let interior = 50..f.n_frames - 50;
        for b in 0..f.n_bands {
            let col: Vec<f64> = interior.clone().map(|i| f.get(i, b)).collect();
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            let std = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / col.len() as f64).sqrt();
            assert!(std / mean.abs() < 0.2, "band {b}: cv {}", std / mean.abs());
        }
    }

    #[test]
    fn log_domain_overlap_is_available() {
        let cfg = SpectrogramConfig {
            n_bands: 8,
            lp_order: 20,
            overlap: OverlapDomain::LogPower,
            ..Default::default()
        };
        let f = fdlp_spectrogram(&noise(40000, 16000.0, 8), &cfg).unwrap();
        assert!(f.data.iter().all(|v| v.is_finite()));
    }
}
