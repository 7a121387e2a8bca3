//! Audio ingestion, spectral front-end, and synthetic test signals.
//!
//! Everything downstream consumes [`AudioBuffer`] (mono f64 samples at
//! 44.1 kHz) and [`Spectrogram`] (Hann-windowed magnitude frames).

mod resample;
mod stft;
mod synth;
mod wav;

pub(crate) use stft::stft_complex;
pub use stft::{stft, Spectrogram};
pub use synth::{midi_to_hz, synth_chord, synth_clicks, synth_noise, synth_tone};
pub use wav::{load_audio, save_wav};

use std::path::PathBuf;
use thiserror::Error;

/// Canonical sample rate of the analysis pipeline.
pub const SAMPLE_RATE: u32 = 44100;
/// Nyquist frequency at the canonical rate.
pub const NYQUIST: f64 = SAMPLE_RATE as f64 / 2.0;
/// Canonical STFT hop in samples (feature rate 44100/1024 ≈ 43.066 Hz).
pub const HOP: usize = 1024;
/// Canonical FFT size. The smallest power of two giving better than 22 Hz
/// bin resolution at 44.1 kHz while keeping the ~43 Hz frame rate.
pub const FFT_SIZE: usize = 2048;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed WAV header in {path}: {detail}")]
    MalformedWav { path: PathBuf, detail: String },
    #[error("unsupported WAV encoding in {path}: {detail}")]
    UnsupportedWav { path: PathBuf, detail: String },
    #[error("input too short: need at least {need} samples, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("fft_size {0} must be a power of two and >= hop {1}")]
    BadFftParams(usize, usize),
    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("frequency {0} Hz is at or above Nyquist ({NYQUIST} Hz)")]
    FrequencyAboveNyquist(f64),
    #[error("pitch list must be non-empty")]
    EmptyPitchList,
}

/// Mono audio at a fixed sample rate; samples are clamped to [-1, 1] on
/// ingestion and synthesis keeps them there by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Element-wise sum, truncated to the shorter buffer.
    pub fn mix(&self, other: &AudioBuffer) -> AudioBuffer {
        let n = self.len().min(other.len());
        let samples = (0..n).map(|i| self.samples[i] + other.samples[i]).collect();
        AudioBuffer::new(samples, self.sample_rate)
    }

    /// Scale all samples by `gain`.
    pub fn scaled(&self, gain: f64) -> AudioBuffer {
        AudioBuffer::new(self.samples.iter().map(|s| s * gain).collect(), self.sample_rate)
    }

    /// Concatenate, keeping this buffer's sample rate.
    pub fn concat(&self, other: &AudioBuffer) -> AudioBuffer {
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples);
        AudioBuffer::new(samples, self.sample_rate)
    }
}
