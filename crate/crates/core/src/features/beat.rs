//! Beat histogram statistics and tempo from onset-function autocorrelation.

/// Beat periodicities are collected over the trailing 6 s of the onset
/// detection function.
pub const BEAT_WINDOW_SECONDS: f64 = 6.0;
/// Histogram lag range covers 60-180 bpm.
const BPM_LO: f64 = 60.0;
const BPM_HI: f64 = 180.0;
/// Tempo octave-folding target range.
const FOLD_LO: f64 = 70.0;
const FOLD_HI: f64 = 140.0;
/// Preferred metrical band (the tracker is biased toward it).
const BAND_LO: f64 = 100.0;
const BAND_HI: f64 = 120.0;
/// Lags within 5% of a multiple or divisor of the strongest lag count as
/// metrically consistent.
const METRICITY_TOL: f64 = 0.05;
const METRICITY_TOP: usize = 5;

/// Beat histogram over integer lags with the four summary statistics of
/// Table-style beat features plus the biased tempo estimate.
#[derive(Debug, Clone)]
pub struct BeatAnalysis {
    pub entropy: f64,
    pub peak_ratio: f64,
    pub simpson_d: f64,
    pub metricity: f64,
    /// Estimated tempo in bpm; 0 is the "no beat found" sentinel.
    pub tempo: f64,
}

impl BeatAnalysis {
    fn silent() -> Self {
        Self {
            entropy: 0.0,
            peak_ratio: 0.0,
            simpson_d: 0.0,
            metricity: 0.0,
            tempo: 0.0,
        }
    }
}

fn lag_range(frame_period: f64) -> (usize, usize) {
    let lag_min = (60.0 / (BPM_HI * frame_period)).ceil() as usize;
    let lag_max = (60.0 / (BPM_LO * frame_period)).floor() as usize;
    (lag_min.max(1), lag_max)
}

/// Analyze the trailing window `odf[..=frame]` (clipped to 6 s) ending at
/// `frame`.
pub fn analyze(odf: &[f64], frame: usize, frame_period: f64) -> BeatAnalysis {
    let window_frames = (BEAT_WINDOW_SECONDS / frame_period).floor() as usize;
    let start = (frame + 1).saturating_sub(window_frames);
    let slice = &odf[start..=frame.min(odf.len() - 1)];
    let (lag_min, lag_max) = lag_range(frame_period);
    if slice.len() <= lag_min + 1 {
        return BeatAnalysis::silent();
    }
    let mean = slice.iter().sum::<f64>() / slice.len() as f64;
    let centered: Vec<f64> = slice.iter().map(|x| x - mean).collect();

    // Raw autocorrelation out to one lag past the histogram range, for the
    // parabolic tempo refinement.
    let max_needed = (lag_max + 1).min(centered.len() - 1);
    let mut autocorr = vec![0.0; max_needed + 1];
    for (lag, slot) in autocorr.iter_mut().enumerate() {
        *slot = centered[lag..]
            .iter()
            .zip(&centered[..centered.len() - lag])
            .map(|(a, b)| a * b)
            .sum();
    }

    let hist_lags: Vec<usize> = (lag_min..=lag_max.min(max_needed)).collect();
    let hist: Vec<f64> = hist_lags.iter().map(|&l| autocorr[l].max(0.0)).collect();
    let total: f64 = hist.iter().sum();
    if total <= 0.0 {
        return BeatAnalysis::silent();
    }

    let probs: Vec<f64> = hist.iter().map(|h| h / total).collect();
    let entropy = -probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>();
    let simpson_d = probs.iter().map(|p| p * p).sum::<f64>();

    // Ranked entries for the ratio and metricity statistics.
    let mut ranked: Vec<(usize, f64)> = hist_lags.iter().copied().zip(hist.iter().copied()).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let peak_ratio = if ranked.len() > 1 && ranked[1].1 > 0.0 {
        ranked[0].1 / ranked[1].1
    } else {
        0.0
    };

    let strongest_lag = ranked[0].0;
    let top: Vec<(usize, f64)> = ranked.into_iter().take(METRICITY_TOP).collect();
    let top_mass: f64 = top.iter().map(|(_, v)| v).sum();
    let consistent_mass: f64 = top
        .iter()
        .filter(|(lag, _)| metrically_consistent(*lag, strongest_lag))
        .map(|(_, v)| v)
        .sum();
    let metricity = if top_mass > 0.0 { consistent_mass / top_mass } else { 0.0 };

    // Tempo: parabolic refinement of the strongest lag, then octave folding
    // and a metrical-level choice biased toward 100-120 bpm.
    let refined = refine_lag(&autocorr, strongest_lag);
    let mut bpm = 60.0 / (refined * frame_period);
    while bpm < FOLD_LO {
        bpm *= 2.0;
    }
    while bpm >= FOLD_HI {
        bpm /= 2.0;
    }
    let tempo = [bpm / 2.0, bpm, bpm * 2.0]
        .into_iter()
        .min_by(|a, b| {
            band_distance(*a)
                .total_cmp(&band_distance(*b))
                .then(((*a) - 110.0).abs().total_cmp(&((*b) - 110.0).abs()))
        })
        .unwrap();

    BeatAnalysis {
        entropy,
        peak_ratio,
        simpson_d,
        metricity,
        tempo,
    }
}

fn band_distance(bpm: f64) -> f64 {
    if (BAND_LO..=BAND_HI).contains(&bpm) {
        0.0
    } else {
        (bpm - BAND_LO).abs().min((bpm - BAND_HI).abs())
    }
}

fn metrically_consistent(lag: usize, strongest: usize) -> bool {
    let lag = lag as f64;
    let strongest = strongest as f64;
    // Multiples k*strongest and divisors strongest/k, within 5%.
    for k in 1..=16 {
        let mult = strongest * k as f64;
        if (lag - mult).abs() <= METRICITY_TOL * mult {
            return true;
        }
        let div = strongest / k as f64;
        if (lag - div).abs() <= METRICITY_TOL * div {
            return true;
        }
    }
    false
}

fn refine_lag(autocorr: &[f64], lag: usize) -> f64 {
    if lag == 0 || lag + 1 >= autocorr.len() {
        return lag as f64;
    }
    let (a, b, c) = (autocorr[lag - 1], autocorr[lag], autocorr[lag + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return lag as f64;
    }
    lag as f64 + (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
}
