//! Local key estimation by Krumhansl-Kessler profile correlation.

use super::{Chord, HarmonyError, Key, KeyEstimate, Mode, PitchClass};

/// Chords considered on each side of the target chord.
pub const KEY_CONTEXT_CHORDS: usize = 5;

/// Krumhansl-Kessler probe-tone profiles, tonic at index 0.
pub const KK_MAJOR: [f64; 12] = [
    6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88,
];
pub const KK_MINOR: [f64; 12] = [
    6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17,
];

fn pearson(a: &[f64; 12], b: &[f64; 12]) -> f64 {
    let mean = |v: &[f64; 12]| v.iter().sum::<f64>() / 12.0;
    let (ma, mb) = (mean(a), mean(b));
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for i in 0..12 {
        let (da, db) = (a[i] - ma, b[i] - mb);
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}

/// Correlation of a pitch-class count vector against all 24 rotated
/// profiles; ties prefer major, then the lowest tonic.
pub fn best_key(counts: &[f64; 12]) -> KeyEstimate {
    let mut best = KeyEstimate {
        key: Key {
            tonic: PitchClass::new(0),
            mode: Mode::Major,
        },
        score: f64::NEG_INFINITY,
    };
    for mode in [Mode::Major, Mode::Minor] {
        let profile = match mode {
            Mode::Major => &KK_MAJOR,
            Mode::Minor => &KK_MINOR,
        };
        for tonic in 0..12usize {
            let mut rotated = [0.0; 12];
            for (pc, slot) in rotated.iter_mut().enumerate() {
                *slot = profile[(pc + 12 - tonic) % 12];
            }
            let score = pearson(counts, &rotated);
            if score > best.score {
                best = KeyEstimate {
                    key: Key {
                        tonic: PitchClass::new(tonic as i32),
                        mode,
                    },
                    score,
                };
            }
        }
    }
    best
}

/// Per-chord local key: unweighted chord-tone counts over the chords within
/// `context` positions either side (truncated at the sequence edges),
/// correlated against the 24 rotated Krumhansl-Kessler profiles.
pub fn local_key(chords: &[Chord], context: usize) -> Result<Vec<KeyEstimate>, HarmonyError> {
    if chords.is_empty() {
        return Err(HarmonyError::EmptySequence);
    }
    let n = chords.len();
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(context);
            let hi = (i + context + 1).min(n);
            let mut counts = [0.0f64; 12];
            for chord in &chords[lo..hi] {
                for &offset in chord.kind.intervals() {
                    counts[chord.root.transposed(offset as i32).index()] += 1.0;
                }
            }
            best_key(&counts)
        })
        .collect())
}
