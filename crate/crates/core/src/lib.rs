//! Frequency domain linear prediction (FDLP).
//!
//! Conventional FDLP (linear prediction of the DCT) and complex FDLP
//! (linear prediction of the inverse DFT) give all-pole models whose time
//! response approximates a signal's power envelope. The complex cepstrum of
//! those models, computed by coefficient recursion, is the modulation
//! spectrum. On top of that sit a sub-band FDLP-spectrogram front end,
//! WAV/feature-file IO and a timing harness.

pub mod bench;
pub mod cepstrum;
pub mod dsp;
pub mod error;
pub mod features;
pub mod lp;
pub mod models;
pub mod spectrogram;
pub mod verify;
pub mod wav;

pub use cepstrum::{
    cepstral_recursion, cepstrum_oracle_fft, modulation_spectrum, modulation_spectrum_direct,
    Cepstrum, ModulationSpectrum,
};
pub use dsp::{AmComponent, AmSignalSpec, ComplexSequence, Domain, Envelope, Signal, C64};
pub use error::{Error, Result};
pub use lp::{LpModel, ModelDomain};
pub use models::{complex_fdlp, conventional_fdlp, envelope};
pub use spectrogram::{fdlp_spectrogram, FeatureMatrix, SpectrogramConfig};
pub use wav::{read_wav, write_wav};
pub use features::{read_features, write_features, FeatureFormat};
