//! Harmonic/percussive separation by median filtering, with resynthesis.
//!
//! Sustained content is enhanced by a median across time, transient content
//! by a median across frequency; Wiener-style soft masks split the complex
//! spectrogram and overlap-add rebuilds each component.

use crate::signal::{stft_complex, AudioBuffer, SignalError};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Median filter length along both axes.
const MEDIAN_LEN: usize = 17;

pub struct Separation {
    /// RMS of the harmonic component per hop-length window, one per frame.
    pub harmonic_rms: Vec<f64>,
    /// RMS of the percussive component per hop-length window, one per frame.
    pub percussive_rms: Vec<f64>,
    /// One-sided percussive-masked magnitudes, for onset detection on the
    /// percussive part.
    pub percussive_mags: Vec<Vec<f64>>,
}

/// Median of a slice window `[lo, hi)` of `values`; windows are truncated at
/// the edges rather than padded.
fn median_of(buf: &mut Vec<f64>, values: impl Iterator<Item = f64>) -> f64 {
    buf.clear();
    buf.extend(values);
    buf.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = buf.len();
    if n % 2 == 1 {
        buf[n / 2]
    } else {
        0.5 * (buf[n / 2 - 1] + buf[n / 2])
    }
}

pub fn separate(buffer: &AudioBuffer, fft_size: usize, hop: usize) -> Result<Separation, SignalError> {
    let spectrum = stft_complex(buffer, fft_size, hop)?;
    let num_frames = spectrum.len();
    let num_bins = fft_size / 2 + 1;
    let half = MEDIAN_LEN / 2;

    let mags: Vec<Vec<f64>> = spectrum
        .iter()
        .map(|frame| frame[..num_bins].iter().map(|c| c.norm()).collect())
        .collect();

    // Harmonic estimate: median across time per bin.
    let mut harm = vec![vec![0.0; num_bins]; num_frames];
    let mut scratch = Vec::with_capacity(MEDIAN_LEN);
    for k in 0..num_bins {
        for (i, row) in harm.iter_mut().enumerate() {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(num_frames);
            row[k] = median_of(&mut scratch, (lo..hi).map(|j| mags[j][k]));
        }
    }
    // Percussive estimate: median across frequency per frame.
    let mut perc = vec![vec![0.0; num_bins]; num_frames];
    for (i, row) in perc.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(num_bins);
            *slot = median_of(&mut scratch, mags[i][lo..hi].iter().copied());
        }
    }

    // Wiener soft masks from the squared estimates.
    let mut mask_h = vec![vec![0.0; num_bins]; num_frames];
    let mut mask_p = vec![vec![0.0; num_bins]; num_frames];
    for i in 0..num_frames {
        for k in 0..num_bins {
            let h2 = harm[i][k] * harm[i][k];
            let p2 = perc[i][k] * perc[i][k];
            let denom = h2 + p2;
            if denom > 0.0 {
                mask_h[i][k] = h2 / denom;
                mask_p[i][k] = p2 / denom;
            }
        }
    }

    let percussive_mags = (0..num_frames)
        .map(|i| (0..num_bins).map(|k| mags[i][k] * mask_p[i][k]).collect())
        .collect();

    let out_len = buffer.len();
    let harmonic = resynthesize(&spectrum, &mask_h, fft_size, hop, out_len);
    let percussive = resynthesize(&spectrum, &mask_p, fft_size, hop, out_len);

    let rms_per_frame = |signal: &[f64]| -> Vec<f64> {
        (0..num_frames)
            .map(|i| {
                let start = i * hop;
                let end = (start + hop).min(signal.len());
                let e: f64 = signal[start..end].iter().map(|x| x * x).sum();
                (e / (end - start).max(1) as f64).sqrt()
            })
            .collect()
    };

    Ok(Separation {
        harmonic_rms: rms_per_frame(&harmonic),
        percussive_rms: rms_per_frame(&percussive),
        percussive_mags,
    })
}

/// Masked inverse STFT. Frames were analysis-windowed with a periodic Hann
/// at 50% overlap, which sums to one, so plain overlap-add reconstructs the
/// interior exactly when the mask is all ones.
fn resynthesize(
    spectrum: &[Vec<Complex<f64>>],
    mask: &[Vec<f64>],
    fft_size: usize,
    hop: usize,
    out_len: usize,
) -> Vec<f64> {
    let num_bins = fft_size / 2 + 1;
    let ifft = FftPlanner::new().plan_fft_inverse(fft_size);
    let mut out = vec![0.0; out_len];
    let mut buf = vec![Complex::new(0.0, 0.0); fft_size];
    for (i, frame) in spectrum.iter().enumerate() {
        for k in 0..fft_size {
            // One-sided mask mirrored onto the conjugate bins.
            let m = if k < num_bins { mask[i][k] } else { mask[i][fft_size - k] };
            buf[k] = frame[k] * m;
        }
        ifft.process(&mut buf);
        let start = i * hop;
        for (j, c) in buf.iter().enumerate() {
            if start + j < out_len {
                out[start + j] += c.re / fft_size as f64;
            }
        }
    }
    out
}
