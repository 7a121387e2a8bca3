//! Short-time Fourier transform with a periodic Hann window.

use super::{AudioBuffer, SignalError};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Magnitude spectrogram. Frame `i` covers samples `[i*hop, i*hop + fft_size)`
/// and is stamped with the frame start time `i*hop/sample_rate`.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    frames: Vec<Vec<f64>>,
    fft_size: usize,
    hop: usize,
    sample_rate: u32,
}

impl Spectrogram {
    /// One-sided magnitude frames, each of length `fft_size/2 + 1`.
    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn num_bins(&self) -> usize {
        self.fft_size / 2 + 1
    }

    /// Start time of frame `i` in seconds.
    pub fn frame_time(&self, i: usize) -> f64 {
        i as f64 * self.hop as f64 / self.sample_rate as f64
    }

    pub fn frame_times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.frames.len()).map(|i| self.frame_time(i))
    }

    /// Seconds between consecutive frames.
    pub fn frame_period(&self) -> f64 {
        self.hop as f64 / self.sample_rate as f64
    }

    /// Center frequency of bin `k` in Hz.
    pub fn bin_freq(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / self.fft_size as f64
    }

    pub fn from_frames(frames: Vec<Vec<f64>>, fft_size: usize, hop: usize, sample_rate: u32) -> Self {
        Self {
            frames,
            fft_size,
            hop,
            sample_rate,
        }
    }
}

/// Periodic Hann window of length `n`.
pub(crate) fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * PI * i as f64 / n as f64).cos()))
        .collect()
}

/// Hann-windowed magnitude spectrogram.
///
/// Frame count is `floor((len - fft_size)/hop) + 1`; the canonical pipeline
/// uses `fft_size` 2048 and `hop` 1024 for a frame rate of ~43.066 Hz.
pub fn stft(buffer: &AudioBuffer, fft_size: usize, hop: usize) -> Result<Spectrogram, SignalError> {
    let frames = stft_complex(buffer, fft_size, hop)?
        .into_iter()
        .map(|frame| frame[..fft_size / 2 + 1].iter().map(|c| c.norm()).collect())
        .collect();
    Ok(Spectrogram::from_frames(frames, fft_size, hop, buffer.sample_rate()))
}

/// Full two-sided complex STFT frames; used internally where resynthesis is
/// needed (harmonic/percussive separation).
pub(crate) fn stft_complex(
    buffer: &AudioBuffer,
    fft_size: usize,
    hop: usize,
) -> Result<Vec<Vec<Complex<f64>>>, SignalError> {
    if !fft_size.is_power_of_two() || fft_size < hop || hop == 0 {
        return Err(SignalError::BadFftParams(fft_size, hop));
    }
    if buffer.len() < fft_size {
        return Err(SignalError::TooShort {
            need: fft_size,
            got: buffer.len(),
        });
    }
    let samples = buffer.samples();
    let window = hann(fft_size);
    let num_frames = (samples.len() - fft_size) / hop + 1;
    let fft = FftPlanner::new().plan_fft_forward(fft_size);
    let mut out = Vec::with_capacity(num_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); fft_size];
    for i in 0..num_frames {
        let start = i * hop;
        for (j, slot) in buf.iter_mut().enumerate() {
            *slot = Complex::new(samples[start + j] * window[j], 0.0);
        }
        fft.process(&mut buf);
        out.push(buf.clone());
    }
    Ok(out)
}
