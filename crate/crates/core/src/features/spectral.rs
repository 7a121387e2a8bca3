//! Per-frame spectral measurements on magnitude/power spectra.

/// Bark band count for the loudness filterbank.
const BARK_BANDS: usize = 40;
/// Specific-loudness compression exponent applied per band.
const LOUDNESS_EXPONENT: f64 = 0.23;
/// Strongest peaks fed to the pairwise dissonance sum.
const MAX_DISSONANCE_PEAKS: usize = 10;
/// Relative power floor inside the flatness geometric mean; applied after
/// scaling by the frame maximum so the measure stays gain-invariant.
const FLATNESS_FLOOR: f64 = 1e-30;

pub fn power(frame: &[f64]) -> Vec<f64> {
    frame.iter().map(|m| m * m).collect()
}

/// Sum of squared magnitudes over bins whose frequency satisfies `pred`.
pub fn band_energy(frame: &[f64], freqs: &[f64], mut pred: impl FnMut(f64) -> bool) -> f64 {
    frame
        .iter()
        .zip(freqs)
        .filter(|(_, &f)| pred(f))
        .map(|(m, _)| m * m)
        .sum()
}

/// Magnitude-weighted mean frequency; 0 for an all-zero frame.
pub fn centroid(frame: &[f64], freqs: &[f64]) -> f64 {
    let total: f64 = frame.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    frame.iter().zip(freqs).map(|(m, f)| m * f).sum::<f64>() / total
}

/// Lowest bin frequency below which `fraction` of the total spectral power
/// falls; 0 for an all-zero frame.
pub fn percentile_freq(power: &[f64], freqs: &[f64], fraction: f64) -> f64 {
    let total: f64 = power.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let target = fraction * total;
    let mut acc = 0.0;
    for (p, &f) in power.iter().zip(freqs) {
        acc += p;
        if acc >= target {
            return f;
        }
    }
    *freqs.last().unwrap()
}

/// Geometric over arithmetic mean of the power spectrum. The spectrum is
/// scaled by its maximum first, which leaves the ratio unchanged but pins the
/// floor handling to a gain-independent reference.
pub fn flatness(power: &[f64]) -> f64 {
    let max = power.iter().fold(0.0f64, |m, &p| m.max(p));
    if max == 0.0 {
        return 0.0;
    }
    let n = power.len() as f64;
    let mut log_sum = 0.0;
    let mut mean = 0.0;
    for &p in power {
        let rel = p / max;
        log_sum += rel.max(FLATNESS_FLOOR).ln();
        mean += rel;
    }
    (log_sum / n).exp() / (mean / n)
}

/// Shannon entropy of the normalized power distribution, scaled by
/// `ln(bin count)` into [0, 1]; 0 for an all-zero frame.
pub fn spectral_entropy(power: &[f64]) -> f64 {
    let total: f64 = power.iter().sum();
    if total == 0.0 || power.len() < 2 {
        return 0.0;
    }
    let mut h = 0.0;
    for &p in power {
        if p > 0.0 {
            let q = p / total;
            h -= q * q.ln();
        }
    }
    h / (power.len() as f64).ln()
}

/// Power spectrum normalized to a probability distribution, or None when the
/// frame is silent.
pub fn normalized_power(power: &[f64]) -> Option<Vec<f64>> {
    let total: f64 = power.iter().sum();
    if total == 0.0 {
        return None;
    }
    Some(power.iter().map(|p| p / total).collect())
}

/// Jensen-Shannon divergence between two distributions (natural log, so the
/// value is bounded by ln 2).
pub fn js_divergence(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = 0.5 * (a + b);
        if a > 0.0 {
            acc += 0.5 * a * (a / m).ln();
        }
        if b > 0.0 {
            acc += 0.5 * b * (b / m).ln();
        }
    }
    acc.max(0.0)
}

/// Loudness bin map: Bark band index per FFT bin, Zwicker's formula with
/// `BARK_BANDS` equal divisions up to the Nyquist Bark value.
pub struct BarkMap {
    band_of_bin: Vec<usize>,
}

fn bark(f: f64) -> f64 {
    13.0 * (0.00076 * f).atan() + 3.5 * ((f / 7500.0) * (f / 7500.0)).atan()
}

impl BarkMap {
    pub fn new(freqs: &[f64]) -> Self {
        let z_max = bark(*freqs.last().unwrap());
        let band_of_bin = freqs
            .iter()
            .map(|&f| (((bark(f) / z_max) * BARK_BANDS as f64) as usize).min(BARK_BANDS - 1))
            .collect();
        Self { band_of_bin }
    }

    /// Band energies compressed by the 0.23 exponent and summed.
    pub fn loudness(&self, power: &[f64]) -> f64 {
        let mut bands = [0.0f64; BARK_BANDS];
        for (&p, &b) in power.iter().zip(&self.band_of_bin) {
            bands[b] += p;
        }
        bands.iter().map(|e| e.powf(LOUDNESS_EXPONENT)).sum()
    }
}

/// Up to ten strongest local maxima as (frequency, magnitude), with parabolic
/// refinement of the peak position.
pub fn spectral_peaks(frame: &[f64], freqs: &[f64]) -> Vec<(f64, f64)> {
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for k in 1..frame.len().saturating_sub(1) {
        if frame[k] > frame[k - 1] && frame[k] > frame[k + 1] {
            peaks.push((k, frame[k]));
        }
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    peaks.truncate(MAX_DISSONANCE_PEAKS);
    let bin_width = freqs[1] - freqs[0];
    peaks
        .into_iter()
        .map(|(k, m)| {
            let denom = frame[k - 1] - 2.0 * frame[k] + frame[k + 1];
            let delta = if denom == 0.0 {
                0.0
            } else {
                (0.5 * (frame[k - 1] - frame[k + 1]) / denom).clamp(-0.5, 0.5)
            };
            (freqs[k] + delta * bin_width, m)
        })
        .collect()
}

/// Sethares pairwise roughness summed over all peak pairs:
/// `a1*a2*(exp(-3.5*s*df) - exp(-5.75*s*df))` with `s = 0.24/(0.021*fmin + 19)`.
pub fn sethares_dissonance(peaks: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for i in 0..peaks.len() {
        for j in (i + 1)..peaks.len() {
            let (f1, a1) = peaks[i];
            let (f2, a2) = peaks[j];
            let fmin = f1.min(f2);
            let df = (f1 - f2).abs();
            let s = 0.24 / (0.021 * fmin + 19.0);
            total += a1 * a2 * ((-3.5 * s * df).exp() - (-5.75 * s * df).exp());
        }
    }
    total
}
