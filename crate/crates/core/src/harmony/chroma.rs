//! 12-bin pitch-class profiles from spectrogram frames.

use crate::signal::Spectrogram;

/// Pitch range mapped into chroma; below 55 Hz resolution is too poor for
/// semitone assignment, above 1760 Hz harmonics dominate fundamentals.
const CHROMA_LO_HZ: f64 = 55.0;
const CHROMA_HI_HZ: f64 = 1760.0;

/// One chroma vector plus the raw spectral energy that produced it; the
/// energy drives the no-chord gate downstream.
#[derive(Debug, Clone)]
pub struct ChromaFrame {
    /// L1-normalized pitch-class distribution (all zero for silence).
    pub pcs: [f64; 12],
    /// Total squared magnitude mapped into the chroma range.
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct ChromaTrail {
    frames: Vec<ChromaFrame>,
    frame_period: f64,
}

impl ChromaTrail {
    pub fn new(frames: Vec<ChromaFrame>, frame_period: f64) -> Self {
        Self {
            frames,
            frame_period,
        }
    }

    pub fn frames(&self) -> &[ChromaFrame] {
        &self.frames
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }
}

/// Pitch class of a frequency: nearest equal-tempered semitone, folded.
fn pitch_class_of(freq: f64) -> usize {
    let midi = 69.0 + 12.0 * (freq / 440.0).log2();
    (midi.round() as i64).rem_euclid(12) as usize
}

/// Map each bin's energy in 55-1760 Hz to its nearest pitch class and
/// L1-normalize per frame.
pub fn chroma(spec: &Spectrogram) -> ChromaTrail {
    let classes: Vec<Option<usize>> = (0..spec.num_bins())
        .map(|k| {
            let f = spec.bin_freq(k);
            ((CHROMA_LO_HZ..=CHROMA_HI_HZ).contains(&f)).then(|| pitch_class_of(f))
        })
        .collect();
    let frames = spec
        .frames()
        .iter()
        .map(|mag| {
            let mut pcs = [0.0f64; 12];
            for (m, class) in mag.iter().zip(&classes) {
                if let Some(pc) = class {
                    pcs[*pc] += m * m;
                }
            }
            let energy: f64 = pcs.iter().sum();
            if energy > 0.0 {
                for p in &mut pcs {
                    *p /= energy;
                }
            }
            ChromaFrame { pcs, energy }
        })
        .collect();
    ChromaTrail::new(frames, spec.frame_period())
}
