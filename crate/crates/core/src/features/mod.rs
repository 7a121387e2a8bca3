//! The 41 per-frame timbral/rhythmic features, their windowed means, and
//! per-song summaries.
//!
//! Frames arrive at the canonical STFT rate (44100/1024 ≈ 43.066 Hz). The
//! memory-dependent features (21, 26-39) read a trailing window and emit 0
//! until two seconds of audio have elapsed, keeping trails rectangular; the
//! tempo slot uses 0 as its "no beat found" sentinel.

pub mod beat;
pub mod hpss;
mod io;
pub mod mel;
pub mod onsets;
pub mod spectral;
pub mod wavelet;

pub use io::{read_summaries_csv, read_trail_csv, write_summaries_csv, write_trail_csv, CsvError};

use crate::signal::{stft, AudioBuffer, SignalError, FFT_SIZE, HOP};
use thiserror::Error;

pub const NUM_FEATURES: usize = 41;

/// Seconds of trailing memory for the windowed features.
pub const MEMORY_SECONDS: f64 = 2.0;

/// Feature vector indices, in the fixed trail order.
pub mod idx {
    pub const LOUDNESS: usize = 0;
    pub const DISSONANCE: usize = 1;
    pub const ENERGY_LOW: usize = 2;
    pub const ENERGY_MID: usize = 3;
    pub const ENERGY_HIGH: usize = 4;
    pub const MFCC_FIRST: usize = 5;
    pub const MFCC_LAST: usize = 16;
    pub const CENTROID: usize = 17;
    pub const PERCENTILE_50: usize = 18;
    pub const PERCENTILE_90: usize = 19;
    pub const FLATNESS: usize = 20;
    pub const JS_DIVERGENCE: usize = 21;
    pub const ENTROPY: usize = 22;
    pub const TRANSIENTNESS: usize = 23;
    pub const HARMONICITY: usize = 24;
    pub const PERCUSSIVENESS: usize = 25;
    pub const ONSET_COUNT_PERC: usize = 26;
    pub const IOI_MEAN_PERC: usize = 27;
    pub const IOI_STD_PERC: usize = 28;
    pub const BEAT_ENTROPY_PERC: usize = 29;
    pub const BEAT_RATIO_PERC: usize = 30;
    pub const BEAT_SIMPSON_PERC: usize = 31;
    pub const BEAT_METRICITY_PERC: usize = 32;
    pub const ONSET_COUNT_FULL: usize = 33;
    pub const IOI_MEAN_FULL: usize = 34;
    pub const IOI_STD_FULL: usize = 35;
    pub const BEAT_ENTROPY_FULL: usize = 36;
    pub const BEAT_RATIO_FULL: usize = 37;
    pub const BEAT_SIMPSON_FULL: usize = 38;
    pub const BEAT_METRICITY_FULL: usize = 39;
    pub const TEMPO: usize = 40;
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("input too short: need at least {need:.2} s, got {got:.2} s")]
    TooShort { need: f64, got: f64 },
    #[error("trail is empty")]
    EmptyTrail,
    #[error("trail spans {span:.2} s, shorter than one {window:.2} s window")]
    SpanTooShort { span: f64, window: f64 },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// One 41-dimensional feature vector stamped with its frame start time.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFrame {
    pub t: f64,
    pub values: [f64; NUM_FEATURES],
}

/// Per-song time series of feature frames at the canonical frame rate.
#[derive(Debug, Clone)]
pub struct FeatureTrail {
    song_id: String,
    frames: Vec<FeatureFrame>,
    frame_period: f64,
}

impl FeatureTrail {
    pub fn new(song_id: impl Into<String>, frames: Vec<FeatureFrame>, frame_period: f64) -> Self {
        Self {
            song_id: song_id.into(),
            frames,
            frame_period,
        }
    }

    pub fn song_id(&self) -> &str {
        &self.song_id
    }

    pub fn set_song_id(&mut self, id: impl Into<String>) {
        self.song_id = id.into();
    }

    pub fn frames(&self) -> &[FeatureFrame] {
        &self.frames
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }

    /// Total time covered: one frame period per frame.
    pub fn span(&self) -> f64 {
        self.frames.len() as f64 * self.frame_period
    }
}

/// Per-song mean feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SongSummary {
    pub song_id: String,
    pub means: [f64; NUM_FEATURES],
}

/// Extract the full 41-feature trail from a mono buffer.
pub fn extract_features(buffer: &AudioBuffer) -> Result<FeatureTrail, FeatureError> {
    if buffer.duration() < MEMORY_SECONDS {
        return Err(FeatureError::TooShort {
            need: MEMORY_SECONDS,
            got: buffer.duration(),
        });
    }
    let spec = stft(buffer, FFT_SIZE, HOP)?;
    let frame_period = spec.frame_period();
    let num_frames = spec.num_frames();
    let freqs: Vec<f64> = (0..spec.num_bins()).map(|k| spec.bin_freq(k)).collect();

    let bark = spectral::BarkMap::new(&freqs);
    let melbank = mel::MelFilterbank::new(&freqs);

    let powers: Vec<Vec<f64>> = spec.frames().iter().map(|f| spectral::power(f)).collect();
    let dists: Vec<Option<Vec<f64>>> =
        powers.iter().map(|p| spectral::normalized_power(p)).collect();

    let separation = hpss::separate(buffer, FFT_SIZE, HOP)?;
    let odf_full = onsets::spectral_flux(spec.frames());
    let odf_perc = onsets::spectral_flux(&separation.percussive_mags);
    let onsets_full = onsets::pick_onsets(&odf_full);
    let onsets_perc = onsets::pick_onsets(&odf_perc);

    let mid_lo = 3000.0 / 2.0f64.sqrt();
    let mid_hi = 3000.0 * 2.0f64.sqrt();

    let mut frames = Vec::with_capacity(num_frames);
    for i in 0..num_frames {
        let t = spec.frame_time(i);
        let warm = t >= MEMORY_SECONDS;
        let mag = &spec.frames()[i];
        let power = &powers[i];
        let mut v = [0.0; NUM_FEATURES];

        v[idx::LOUDNESS] = bark.loudness(power);
        v[idx::DISSONANCE] = spectral::sethares_dissonance(&spectral::spectral_peaks(mag, &freqs));
        v[idx::ENERGY_LOW] = spectral::band_energy(mag, &freqs, |f| f < 400.0);
        v[idx::ENERGY_MID] = spectral::band_energy(mag, &freqs, |f| (mid_lo..=mid_hi).contains(&f));
        v[idx::ENERGY_HIGH] = spectral::band_energy(mag, &freqs, |f| f > 6000.0);
        let mfcc = melbank.mfcc(power);
        v[idx::MFCC_FIRST..=idx::MFCC_LAST].copy_from_slice(&mfcc);
        v[idx::CENTROID] = spectral::centroid(mag, &freqs);
        v[idx::PERCENTILE_50] = spectral::percentile_freq(power, &freqs, 0.5);
        v[idx::PERCENTILE_90] = spectral::percentile_freq(power, &freqs, 0.9);
        v[idx::FLATNESS] = spectral::flatness(power);
        v[idx::ENTROPY] = spectral::spectral_entropy(power);

        if warm {
            if let Some(cur) = &dists[i] {
                let mut acc = 0.0;
                let mut n = 0usize;
                for j in (0..i).rev() {
                    if spec.frame_time(j) <= t - MEMORY_SECONDS {
                        break;
                    }
                    if let Some(past) = &dists[j] {
                        acc += spectral::js_divergence(cur, past);
                        n += 1;
                    }
                }
                if n > 0 {
                    v[idx::JS_DIVERGENCE] = acc / n as f64;
                }
            }
        }

        let start = i * HOP;
        v[idx::TRANSIENTNESS] = wavelet::transientness(&buffer.samples()[start..start + FFT_SIZE]);
        v[idx::HARMONICITY] = separation.harmonic_rms[i];
        v[idx::PERCUSSIVENESS] = separation.percussive_rms[i];

        if warm {
            let (c, m, s) =
                onsets::trailing_onset_stats(&onsets_perc, i, frame_period, MEMORY_SECONDS);
            v[idx::ONSET_COUNT_PERC] = c;
            v[idx::IOI_MEAN_PERC] = m;
            v[idx::IOI_STD_PERC] = s;
            let bp = beat::analyze(&odf_perc, i, frame_period);
            v[idx::BEAT_ENTROPY_PERC] = bp.entropy;
            v[idx::BEAT_RATIO_PERC] = bp.peak_ratio;
            v[idx::BEAT_SIMPSON_PERC] = bp.simpson_d;
            v[idx::BEAT_METRICITY_PERC] = bp.metricity;

            let (c, m, s) =
                onsets::trailing_onset_stats(&onsets_full, i, frame_period, MEMORY_SECONDS);
            v[idx::ONSET_COUNT_FULL] = c;
            v[idx::IOI_MEAN_FULL] = m;
            v[idx::IOI_STD_FULL] = s;
            let bf = beat::analyze(&odf_full, i, frame_period);
            v[idx::BEAT_ENTROPY_FULL] = bf.entropy;
            v[idx::BEAT_RATIO_FULL] = bf.peak_ratio;
            v[idx::BEAT_SIMPSON_FULL] = bf.simpson_d;
            v[idx::BEAT_METRICITY_FULL] = bf.metricity;
            v[idx::TEMPO] = bf.tempo;
        }

        frames.push(FeatureFrame { t, values: v });
    }

    Ok(FeatureTrail::new("", frames, frame_period))
}

/// Mean of all frames in [t, t+window) for t = 0, hop, 2*hop, ... while the
/// window fits inside the trail's span.
pub fn windowed_means(
    trail: &FeatureTrail,
    window: f64,
    hop: f64,
) -> Result<Vec<FeatureFrame>, FeatureError> {
    let span = trail.span();
    if trail.frames().is_empty() || span < window {
        return Err(FeatureError::SpanTooShort { span, window });
    }
    let mut out = Vec::new();
    let mut w = 0usize;
    loop {
        let t = w as f64 * hop;
        if t + window > span + 1e-9 {
            break;
        }
        let mut sum = [0.0; NUM_FEATURES];
        let mut n = 0usize;
        for frame in trail.frames() {
            if frame.t >= t && frame.t < t + window {
                for (s, v) in sum.iter_mut().zip(&frame.values) {
                    *s += v;
                }
                n += 1;
            }
        }
        if n > 0 {
            for s in &mut sum {
                *s /= n as f64;
            }
            out.push(FeatureFrame { t, values: sum });
        }
        w += 1;
    }
    Ok(out)
}

/// Per-feature arithmetic mean over the whole trail. Tempo (feature 40)
/// averages only non-sentinel frames so "no beat found" stretches do not
/// drag the song mean toward zero.
pub fn song_summary(trail: &FeatureTrail) -> Result<SongSummary, FeatureError> {
    if trail.frames().is_empty() {
        return Err(FeatureError::EmptyTrail);
    }
    let n = trail.frames().len() as f64;
    let mut means = [0.0; NUM_FEATURES];
    for frame in trail.frames() {
        for (m, v) in means.iter_mut().zip(&frame.values) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let tempos: Vec<f64> = trail
        .frames()
        .iter()
        .map(|f| f.values[idx::TEMPO])
        .filter(|&t| t > 0.0)
        .collect();
    means[idx::TEMPO] = if tempos.is_empty() {
        0.0
    } else {
        tempos.iter().sum::<f64>() / tempos.len() as f64
    };
    Ok(SongSummary {
        song_id: trail.song_id().to_string(),
        means,
    })
}
