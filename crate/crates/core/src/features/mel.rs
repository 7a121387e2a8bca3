//! Mel filterbank and cepstral coefficients.

use std::f64::consts::PI;

/// Triangular mel bands: 42 filters spanning 0 Hz to Nyquist.
pub const MEL_BANDS: usize = 42;
/// Cepstral coefficients kept (1..=12; coefficient 0 is dropped as
/// loudness-redundant).
pub const MFCC_COUNT: usize = 12;
/// Floor applied before the log to keep silent bands finite.
const LOG_FLOOR: f64 = 1e-10;

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Precomputed triangular weights per band over the FFT bins.
pub struct MelFilterbank {
    // (band, bin, weight) triples would waste space; store per-band sparse rows.
    rows: Vec<Vec<(usize, f64)>>,
}

impl MelFilterbank {
    pub fn new(freqs: &[f64]) -> Self {
        let nyquist = *freqs.last().unwrap();
        let mel_max = hz_to_mel(nyquist);
        // Band b peaks at point b+1 of BANDS+2 equally spaced mel points.
        let points: Vec<f64> = (0..MEL_BANDS + 2)
            .map(|i| mel_to_hz(mel_max * i as f64 / (MEL_BANDS + 1) as f64))
            .collect();
        let rows = (0..MEL_BANDS)
            .map(|b| {
                let (lo, mid, hi) = (points[b], points[b + 1], points[b + 2]);
                freqs
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &f)| {
                        let w = if f >= lo && f <= mid && mid > lo {
                            (f - lo) / (mid - lo)
                        } else if f > mid && f <= hi && hi > mid {
                            (hi - f) / (hi - mid)
                        } else {
                            0.0
                        };
                        (w > 0.0).then_some((k, w))
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn band_energies(&self, power: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(k, w)| w * power[k]).sum())
            .collect()
    }

    /// Log band energies -> DCT-II, keeping coefficients 1..=12.
    pub fn mfcc(&self, power: &[f64]) -> [f64; MFCC_COUNT] {
        let logs: Vec<f64> = self
            .band_energies(power)
            .into_iter()
            .map(|e| e.max(LOG_FLOOR).ln())
            .collect();
        let n = logs.len() as f64;
        let mut out = [0.0; MFCC_COUNT];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = (i + 1) as f64;
            *slot = logs
                .iter()
                .enumerate()
                .map(|(b, &v)| v * (PI * k * (b as f64 + 0.5) / n).cos())
                .sum();
        }
        out
    }
}
