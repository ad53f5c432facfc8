//! RIFF/WAVE PCM16 mono reader and writer.

use std::fs;
use std::path::Path;

use crate::dsp::Signal;
use crate::error::{Error, Result};

const PCM: u16 = 1;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(Error::Parse {
                offset: self.pos,
                msg: format!("truncated while reading {what}"),
            });
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        let b = self.take(2, what)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

/// Decodes an in-memory WAV file.
pub fn parse_wav(bytes: &[u8]) -> Result<Signal> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(4, "RIFF tag")? != b"RIFF" {
        return Err(Error::Parse { offset: 0, msg: "missing RIFF tag".into() });
    }
    c.u32("RIFF size")?;
    if c.take(4, "WAVE tag")? != b"WAVE" {
        return Err(Error::Parse { offset: 8, msg: "missing WAVE tag".into() });
    }

    let mut sample_rate = None;
    loop {
        let chunk_at = c.pos;
        let id = c.take(4, "chunk id")?;
        let size = c.u32("chunk size")? as usize;
        match id {
            b"fmt " => {
                let body_at = c.pos;
                let format = c.u16("audio format")?;
                let channels = c.u16("channel count")?;
                let rate = c.u32("sample rate")?;
                c.u32("byte rate")?;
                c.u16("block align")?;
                let bits = c.u16("bits per sample")?;
                if format != PCM {
                    return Err(Error::UnsupportedFormat {
                        field: "audio_format",
                        value: format.to_string(),
                    });
                }
                if channels != 1 {
                    return Err(Error::UnsupportedFormat {
                        field: "num_channels",
                        value: channels.to_string(),
                    });
                }
                if bits != 16 {
                    return Err(Error::UnsupportedFormat {
                        field: "bits_per_sample",
                        value: bits.to_string(),
                    });
                }
                if rate == 0 {
                    return Err(Error::UnsupportedFormat {
                        field: "sample_rate",
                        value: "0".into(),
                    });
                }
                sample_rate = Some(rate as f64);
                c.pos = body_at;
                c.take(size + size % 2, "fmt chunk")?;
            }
            b"data" => {
                let Some(rate) = sample_rate else {
                    return Err(Error::Parse {
                        offset: chunk_at,
                        msg: "data chunk before fmt chunk".into(),
                    });
                };
                if size % 2 != 0 {
                    return Err(Error::Parse {
                        offset: chunk_at + 4,
                        msg: format!("data size {size} is not a whole number of samples"),
                    });
                }
                let payload = c.take(size, "sample data")?;
                let samples = payload
                    .chunks_exact(2)
                    .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
                    .collect();
                return Signal::new(samples, rate);
            }
            _ => {
                c.take(size + size % 2, "chunk body")?;
            }
        }
    }
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_wav(&bytes)
}

/// Encodes samples as PCM16, rounding and clipping to the i16 range.
pub fn encode_wav(x: &Signal) -> Vec<u8> {
    let rate = x.sample_rate().round() as u32;
    let data_len = 2 * x.len() as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(2 * rate).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in x.samples() {
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    out
}

pub fn write_wav(x: &Signal, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_wav(x)).map_err(|e| Error::io(path, e))
}
