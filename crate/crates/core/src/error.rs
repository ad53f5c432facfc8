use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{op}: input sequence is empty")]
    EmptyInput { op: &'static str },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid signal parameters: {0}")]
    Validation(String),

    /// Zero-energy input (r[0] <= 0) handed to linear prediction.
    #[error("degenerate signal: zero energy, no predictor exists")]
    DegenerateSignal,

    #[error("degenerate model: gain must be positive, got {gain}")]
    DegenerateModel { gain: f64 },

    /// Prediction error became non-positive during the Levinson recursion.
    #[error("ill-conditioned autocorrelation: prediction error {error:e} at order {order}")]
    IllConditioned { order: usize, error: f64 },

    #[error("unstable model: all-pole response is not finite at grid point {index}")]
    Instability { index: usize },

    #[error("root finding did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("phase increment {jump:.3} rad between grid points {index} and {next}; use a denser grid", next = index + 1)]
    Resolution { index: usize, jump: f64 },

    #[error("model is not minimum phase (net phase winding {winding})")]
    NotMinimumPhase { winding: i64 },

    #[error("non-finite feature at frame {frame}, band {band}")]
    Numeric { frame: usize, band: usize },

    #[error("unsupported WAV format: {field} = {value}")]
    UnsupportedFormat { field: &'static str, value: String },

    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
