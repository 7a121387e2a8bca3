//! Minimal RIFF/WAVE reader and writer.
//!
//! Reads linear PCM (16/24-bit integer, 32-bit float), mono or stereo.
//! Stereo is mixed to mono by per-sample channel mean; non-44.1 kHz sources
//! are resampled. Writes 16-bit mono PCM at 44.1 kHz.

use super::resample::resample_to;
use super::{AudioBuffer, SignalError, SAMPLE_RATE};
use std::fs;
use std::io::Write;
use std::path::Path;

const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

struct Format {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

pub fn load_audio(path: impl AsRef<Path>) -> Result<AudioBuffer, SignalError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| SignalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |detail: &str| SignalError::MalformedWav {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };

    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing RIFF/WAVE signature"));
    }

    // Walk the chunk list for fmt and data.
    let mut fmt: Option<Format> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_start = pos + 8;
        let body_end = body_start + size;
        if body_end > bytes.len() {
            return Err(malformed("chunk extends past end of file"));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(malformed("fmt chunk shorter than 16 bytes"));
                }
                let b = &bytes[body_start..body_end];
                let mut format_tag = u16::from_le_bytes([b[0], b[1]]);
                if format_tag == FORMAT_EXTENSIBLE {
                    // Sub-format GUID starts with the effective format tag.
                    if size < 40 {
                        return Err(malformed("extensible fmt chunk shorter than 40 bytes"));
                    }
                    format_tag = u16::from_le_bytes([b[24], b[25]]);
                }
                fmt = Some(Format {
                    format_tag,
                    channels: u16::from_le_bytes([b[2], b[3]]),
                    sample_rate: u32::from_le_bytes([b[4], b[5], b[6], b[7]]),
                    bits_per_sample: u16::from_le_bytes([b[14], b[15]]),
                });
            }
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        // Chunks are word-aligned.
        pos = body_end + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| malformed("missing fmt chunk"))?;
    let data = data.ok_or_else(|| malformed("missing data chunk"))?;
    let unsupported = |detail: String| SignalError::UnsupportedWav {
        path: path.to_path_buf(),
        detail,
    };
    if fmt.channels == 0 || fmt.channels > 2 {
        return Err(unsupported(format!("{} channels (want 1 or 2)", fmt.channels)));
    }
    if fmt.sample_rate == 0 {
        return Err(malformed("zero sample rate"));
    }
    let decode: fn(&[u8]) -> f64 = match (fmt.format_tag, fmt.bits_per_sample) {
        (FORMAT_PCM, 16) => |b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0,
        (FORMAT_PCM, 24) => |b| {
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            v as f64 / 8388608.0
        },
        (FORMAT_IEEE_FLOAT, 32) => |b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
        (tag, bits) => {
            return Err(unsupported(format!(
                "format tag {tag} at {bits} bits (want 16/24-bit PCM or 32-bit float)"
            )))
        }
    };

    let bytes_per_sample = fmt.bits_per_sample as usize / 8;
    let block = bytes_per_sample * fmt.channels as usize;
    if block == 0 || data.len() % block != 0 {
        return Err(malformed("data chunk is not a whole number of sample frames"));
    }
    let n_frames = data.len() / block;
    let mut samples = Vec::with_capacity(n_frames);
    for frame in data.chunks_exact(block) {
        let mut acc = 0.0;
        for ch in frame.chunks_exact(bytes_per_sample) {
            acc += decode(ch);
        }
        samples.push((acc / fmt.channels as f64).clamp(-1.0, 1.0));
    }

    let samples = if fmt.sample_rate == SAMPLE_RATE {
        samples
    } else {
        resample_to(&samples, fmt.sample_rate, SAMPLE_RATE)
    };
    Ok(AudioBuffer::new(samples, SAMPLE_RATE))
}

/// Write a buffer as 16-bit mono PCM.
pub fn save_wav(buffer: &AudioBuffer, path: impl AsRef<Path>) -> Result<(), SignalError> {
    let path = path.as_ref();
    let n = buffer.len();
    let data_len = (n * 2) as u32;
    let mut out = Vec::with_capacity(44 + n * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&buffer.sample_rate().to_le_bytes());
    out.extend_from_slice(&(buffer.sample_rate() * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in buffer.samples() {
        // Same 1/32768 scale as the reader, so the write/read round trip
        // stays within one 16-bit quantization step.
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    let mut f = fs::File::create(path).map_err(|source| SignalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(&out).map_err(|source| SignalError::Io {
        path: path.to_path_buf(),
        source,
    })
}
