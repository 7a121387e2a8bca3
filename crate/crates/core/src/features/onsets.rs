//! Spectral-flux onset detection and trailing inter-onset statistics.

/// Half-width of the adaptive median threshold window, in frames.
const THRESHOLD_HALF: usize = 8;
/// Multiplier on the local median.
const THRESHOLD_SCALE: f64 = 1.5;
/// Absolute offset as a fraction of the global flux maximum; keeps digital
/// silence onset-free without pinning the scale to any unit.
const THRESHOLD_REL_FLOOR: f64 = 0.01;
/// Minimum spacing between reported onsets, in frames (~70 ms).
const MIN_GAP: usize = 3;

/// Half-wave-rectified spectral flux per frame. The first frame has no
/// predecessor and reports 0.
pub fn spectral_flux(mags: &[Vec<f64>]) -> Vec<f64> {
    let mut odf = Vec::with_capacity(mags.len());
    odf.push(0.0);
    for pair in mags.windows(2) {
        let flux = pair[1]
            .iter()
            .zip(&pair[0])
            .map(|(cur, prev)| (cur - prev).max(0.0))
            .sum();
        odf.push(flux);
    }
    odf
}

/// Frame indices of onsets: local flux maxima above an adaptive median
/// threshold, at least `MIN_GAP` frames apart.
pub fn pick_onsets(odf: &[f64]) -> Vec<usize> {
    let global_max = odf.iter().fold(0.0f64, |m, &x| m.max(x));
    if global_max == 0.0 {
        return Vec::new();
    }
    let floor = THRESHOLD_REL_FLOOR * global_max;
    let mut scratch: Vec<f64> = Vec::with_capacity(2 * THRESHOLD_HALF + 1);
    let mut onsets: Vec<usize> = Vec::new();
    for i in 1..odf.len() {
        let is_peak = odf[i] >= odf[i - 1] && (i + 1 == odf.len() || odf[i] > odf[i + 1]);
        if !is_peak {
            continue;
        }
        let lo = i.saturating_sub(THRESHOLD_HALF);
        let hi = (i + THRESHOLD_HALF + 1).min(odf.len());
        scratch.clear();
        scratch.extend_from_slice(&odf[lo..hi]);
        scratch.sort_unstable_by(|a, b| a.total_cmp(b));
        let median = scratch[scratch.len() / 2];
        if odf[i] > THRESHOLD_SCALE * median + floor {
            if let Some(&last) = onsets.last() {
                if i - last < MIN_GAP {
                    continue;
                }
            }
            onsets.push(i);
        }
    }
    onsets
}

/// Trailing-window counts: onsets with times in `(t - window, t]`, the mean
/// of the inter-onset intervals between them, and the population standard
/// deviation of those intervals. Fewer than 2 onsets give a 0 mean; fewer
/// than 3 give a 0 deviation.
pub fn trailing_onset_stats(
    onsets: &[usize],
    frame: usize,
    frame_period: f64,
    window: f64,
) -> (f64, f64, f64) {
    let t = frame as f64 * frame_period;
    let in_window: Vec<f64> = onsets
        .iter()
        .map(|&i| i as f64 * frame_period)
        .filter(|&tau| tau > t - window && tau <= t)
        .collect();
    let count = in_window.len() as f64;
    if in_window.len() < 2 {
        return (count, 0.0, 0.0);
    }
    let iois: Vec<f64> = in_window.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = iois.iter().sum::<f64>() / iois.len() as f64;
    let var = iois.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / iois.len() as f64;
    (count, mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_rectifies_decreases() {
        let mags = vec![vec![1.0, 1.0], vec![3.0, 0.0], vec![0.0, 0.0]];
        let odf = spectral_flux(&mags);
        assert_eq!(odf, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn silence_has_no_onsets() {
        assert!(pick_onsets(&vec![0.0; 200]).is_empty());
    }

    #[test]
    fn isolated_spikes_are_onsets() {
        let mut odf = vec![0.0; 200];
        for &i in &[20, 60, 100, 140] {
            odf[i] = 1.0;
        }
        assert_eq!(pick_onsets(&odf), vec![20, 60, 100, 140]);
    }

    #[test]
    fn nearby_spikes_collapse_to_one() {
        let mut odf = vec![0.0; 100];
        odf[50] = 1.0;
        odf[51] = 0.8;
        odf[52] = 0.9;
        let onsets = pick_onsets(&odf);
        assert_eq!(onsets, vec![50]);
    }

    #[test]
    fn trailing_stats_on_regular_grid() {
        // Onsets every 20 frames, ~0.464 s at the canonical rate; probe at a
        // non-onset frame so the window boundary is unambiguous.
        let onsets: Vec<usize> = (1..40).map(|k| 20 * k).collect();
        let dt = 1024.0 / 44100.0;
        let (count, mean, std) = trailing_onset_stats(&onsets, 310, dt, 2.0);
        assert_eq!(count, 4.0);
        assert!((mean - 20.0 * dt).abs() < 1e-12);
        assert!(std < 1e-12);
        // At an onset frame the closed right edge admits a fifth onset
        // (2 s / 0.464 s per gap spans 4.3 gaps).
        let (count, _, _) = trailing_onset_stats(&onsets, 300, dt, 2.0);
        assert_eq!(count, 5.0);
    }

    #[test]
    fn too_few_onsets_give_zero_stats() {
        let (count, mean, std) = trailing_onset_stats(&[100], 101, 0.023, 2.0);
        assert_eq!((count, mean, std), (1.0, 0.0, 0.0));
    }
}
