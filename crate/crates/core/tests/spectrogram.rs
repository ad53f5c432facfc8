use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fdlp::spectrogram::{fdlp_spectrogram, SpectrogramConfig};
use fdlp::Signal;

fn noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-0.1..0.1)).collect()
}

fn small_config() -> SpectrogramConfig {
    SpectrogramConfig {
        n_bands: 10,
        lp_order: 30,
        ..SpectrogramConfig::default()
    }
}

#[test]
fn shift_by_whole_hops_shifts_features() {
    let cfg = small_config();
    let fs = cfg.sample_rate_hz;
    let hop = cfg.hop_len();
    let body = noise(48000, 1);
    let mut shifted = noise(2 * hop, 2);
    shifted.extend_from_slice(&body);

    let a = fdlp_spectrogram(&Signal::new(body, fs).unwrap(), &cfg).unwrap();
    let b = fdlp_spectrogram(&Signal::new(shifted, fs).unwrap(), &cfg).unwrap();
    let lag = 2 * hop * 100 / fs as usize;
    assert_eq!(b.n_frames, a.n_frames + lag);
    // frames fed only by frames that exist unchanged in both analyses
    let first = cfg.window_len() * 100 / fs as usize;
    for f in first..a.n_frames {
        for band in 0..a.n_bands {
            let (x, y) = (a.get(f, band), b.get(f + lag, band));
            assert!((x - y).abs() < 1e-6, "frame {f} band {band}: {x} vs {y}");
        }
    }
}

#[test]
fn parallel_runs_are_deterministic() {
    let cfg = small_config();
    let x = Signal::new(noise(40000, 3), 16000.0).unwrap();
    let a = fdlp_spectrogram(&x, &cfg).unwrap();
    let b = fdlp_spectrogram(&x, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn silence_is_degenerate() {
    let cfg = small_config();
    let x = Signal::new(vec![0.0; 30000], 16000.0).unwrap();
    assert!(matches!(fdlp_spectrogram(&x, &cfg), Err(fdlp::Error::DegenerateSignal)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gain_adds_twice_its_log(seed in any::<u64>(), gain in 0.01f64..50.0, secs in 0.3f64..2.5) {
        let cfg = small_config();
        let n = (secs * cfg.sample_rate_hz) as usize;
        let x = Signal::new(noise(n, seed), cfg.sample_rate_hz).unwrap();
        let a = fdlp_spectrogram(&x, &cfg).unwrap();
        let b = fdlp_spectrogram(&x.scaled(gain), &cfg).unwrap();
        prop_assert_eq!(a.n_frames, n.div_ceil(160));
        for (u, v) in a.data.iter().zip(&b.data) {
            prop_assert!((v - u - 2.0 * gain.ln()).abs() < 1e-8, "{}", v - u - 2.0 * gain.ln());
        }
    }
}
