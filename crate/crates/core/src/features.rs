//! Feature matrix files.
//!
//! Binary layout, little-endian: `"FDLP"`, `u16` version, `u32` frames,
//! `u32` bands, `f32` frame rate, `f32` sample rate, then `frames * bands`
//! `f32` values in row-major order. CSV has a `frame,band_0,...` header and
//! one row per frame.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectrogram::FeatureMatrix;

pub const MAGIC: &[u8; 4] = b"FDLP";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureFormat {
    Binary,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureFileHeader {
    pub version: u16,
    pub frames: u32,
    pub bands: u32,
    pub frame_rate_hz: f32,
    pub sample_rate_hz: f32,
}

impl FeatureFileHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(MAGIC);
        out[4..6].copy_from_slice(&self.version.to_le_bytes());
        out[6..10].copy_from_slice(&self.frames.to_le_bytes());
        out[10..14].copy_from_slice(&self.bands.to_le_bytes());
        out[14..18].copy_from_slice(&self.frame_rate_hz.to_le_bytes());
        out[18..22].copy_from_slice(&self.sample_rate_hz.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Parse {
                offset: bytes.len(),
                msg: format!("feature header needs {HEADER_LEN} bytes"),
            });
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Parse { offset: 0, msg: "bad magic".into() });
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let header = FeatureFileHeader {
            version: u16::from_le_bytes([bytes[4], bytes[5]]),
            frames: u32_at(6),
            bands: u32_at(10),
            frame_rate_hz: f32::from_bits(u32_at(14)),
            sample_rate_hz: f32::from_bits(u32_at(18)),
        };
        if header.version != VERSION {
            return Err(Error::Parse {
                offset: 4,
                msg: format!("unsupported version {}", header.version),
            });
        }
        Ok(header)
    }
}

fn check_finite(m: &FeatureMatrix) -> Result<()> {
    if m.data.len() != m.n_frames * m.n_bands {
        return Err(Error::Argument(format!(
            "{} values do not fill {} x {}",
            m.data.len(),
            m.n_frames,
            m.n_bands
        )));
    }
    match m.data.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Numeric {
            frame: i / m.n_bands,
            band: i % m.n_bands,
        }),
        None => Ok(()),
    }
}

pub fn encode_binary(m: &FeatureMatrix) -> Result<Vec<u8>> {
    check_finite(m)?;
    let header = FeatureFileHeader {
        version: VERSION,
        frames: m.n_frames as u32,
        bands: m.n_bands as u32,
        frame_rate_hz: m.frame_rate_hz as f32,
        sample_rate_hz: m.sample_rate_hz as f32,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * m.data.len());
    out.extend_from_slice(&header.to_bytes());
    for v in &m.data {
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    Ok(out)
}

pub fn encode_csv(m: &FeatureMatrix) -> Result<String> {
    check_finite(m)?;
    let mut out = String::from("frame");
    for b in 0..m.n_bands {
        write!(out, ",band_{b}").unwrap();
    }
    out.push('\n');
    for f in 0..m.n_frames {
        write!(out, "{f}").unwrap();
        for v in m.row(f) {
            write!(out, ",{v:.9e}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_features(m: &FeatureMatrix, path: impl AsRef<Path>, format: FeatureFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        FeatureFormat::Binary => encode_binary(m)?,
        FeatureFormat::Csv => encode_csv(m)?.into_bytes(),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn decode_binary(bytes: &[u8]) -> Result<FeatureMatrix> {
    let h = FeatureFileHeader::parse(bytes)?;
    let (frames, bands) = (h.frames as usize, h.bands as usize);
    let expected = HEADER_LEN + 4 * frames * bands;
    if bytes.len() != expected {
        return Err(Error::Parse {
            offset: bytes.len().min(expected),
            msg: format!("payload of {} bytes, header implies {expected}", bytes.len()),
        });
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
        .collect();
    Ok(FeatureMatrix {
        data,
        n_frames: frames,
        n_bands: bands,
        frame_rate_hz: h.frame_rate_hz as f64,
        sample_rate_hz: h.sample_rate_hz as f64,
        band_centers_hz: Vec::new(),
        duration_s: frames as f64 / h.frame_rate_hz as f64,
        source: None,
    })
}

pub fn read_features(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_binary(&bytes)
}
