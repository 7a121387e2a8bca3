//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS line (run with `--nocapture` to see them alongside cargo's
//! per-test verdicts).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;
use trackline_core::corpus::{
    normalize_features, representativeness, similarity_matrix, trend_fit, FeatureSubset, Metric,
    SimilarityMatrix,
};
use trackline_core::features::{self, idx, SongSummary, NUM_FEATURES};
use trackline_core::harmony::{
    chord_template, chords_of, chroma, detect_chords, local_key, plagal_perfect_ratio,
    rank_transitions, transition_histogram, Chord, ChordEvent, ChordLabel, ChordType, ChromaFrame,
    ChromaTrail, Key, KeyEstimate, Mode, PitchClass, TransitionCell, TransitionHistogram,
    KEY_CONTEXT_CHORDS,
};
use trackline_core::learn::{
    accuracy, greedy_select, percent3, predict_mlp, predict_nb, song_preserving_split, train_mlp,
    train_nb, ModelKind, SegmentDataset, SegmentRow,
};
use trackline_core::signal::{stft, synth_chord, synth_clicks, synth_noise, synth_tone, AudioBuffer, FFT_SIZE, HOP};

/// Small deterministic generator for fixture values in [0, 1).
struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493))
    }

    fn next(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

// --- Criterion 1 -----------------------------------------------------------

/// The 20 printed transition rows: (start_root, end_root, start, end, count).
const TABLE3_ROWS: [(u8, u8, ChordType, ChordType, u64); 20] = [
    (5, 0, ChordType::Major, ChordType::Major, 470),
    (0, 5, ChordType::Major, ChordType::Major, 401),
    (0, 5, ChordType::Major, ChordType::Major7, 149),
    (5, 0, ChordType::Major7, ChordType::Major, 145),
    (0, 0, ChordType::Major, ChordType::Minor, 139),
    (5, 0, ChordType::Minor, ChordType::Major, 135),
    (7, 0, ChordType::Major, ChordType::Major, 134),
    (0, 5, ChordType::Major, ChordType::Minor, 121),
    (0, 0, ChordType::Minor, ChordType::Major, 120),
    (0, 7, ChordType::Major, ChordType::Major, 113),
    (9, 0, ChordType::Minor, ChordType::Major, 106),
    (0, 0, ChordType::Major, ChordType::Dominant7, 95),
    (8, 0, ChordType::Major, ChordType::Minor, 92),
    (5, 0, ChordType::Major6, ChordType::Major, 90),
    (0, 5, ChordType::Minor, ChordType::Major, 87),
    (0, 3, ChordType::Major, ChordType::Major6, 80),
    (0, 5, ChordType::Major, ChordType::Major6, 75),
    (5, 0, ChordType::Major, ChordType::Minor, 74),
    (0, 0, ChordType::Major, ChordType::Major7, 74),
    (0, 8, ChordType::Minor, ChordType::Major, 69),
];

const TABLE3_TOTAL: u64 = 10440;

fn table3_fixture() -> TransitionHistogram {
    let mut hist = TransitionHistogram::new();
    let mut placed = 0;
    for (start_root, end_root, start_kind, end_kind, count) in TABLE3_ROWS {
        hist.insert(
            TransitionCell {
                start_root,
                start_kind,
                end_root,
                end_kind,
            },
            count,
        );
        placed += count;
    }
    // The unprinted remainder is spread over augmented-to-augmented cells,
    // none exceeding the 20th printed count.
    let mut remainder = TABLE3_TOTAL - placed;
    'fill: for start_root in 0..12u8 {
        for end_root in 0..12u8 {
            if remainder == 0 {
                break 'fill;
            }
            let chunk = remainder.min(60);
            hist.insert(
                TransitionCell {
                    start_root,
                    start_kind: ChordType::Augmented,
                    end_root,
                    end_kind: ChordType::Augmented,
                },
                chunk,
            );
            remainder -= chunk;
        }
    }
    hist
}

#[test]
fn criterion_01_table3_arithmetic() {
    let start = Instant::now();
    let hist = table3_fixture();
    assert_eq!(hist.total(), TABLE3_TOTAL);

    let ratio = plagal_perfect_ratio(&hist).unwrap();
    assert!((ratio - 470.0 / 134.0).abs() < 1e-12);
    assert!((ratio - 3.507).abs() <= 0.01, "plagal/perfect {ratio}");

    let rows = rank_transitions(&hist, 20).unwrap();
    assert_eq!(rows[0].count, 470);
    assert_eq!(rows[0].roman, "IV->I");
    assert_eq!(rows[0].example, "F->C");
    let proportion_3dp = (rows[0].proportion * 1000.0).round() / 1000.0;
    assert_eq!(proportion_3dp, 0.045);
    // All 20 printed rows rank in printed count order.
    for (i, (_, _, _, _, count)) in TABLE3_ROWS.iter().enumerate() {
        assert_eq!(rows[i].count, *count, "rank {}", i + 1);
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: plagal/perfect {ratio:.3}, rank-1 proportion 0.045, {elapsed:?}");
}

// --- Criterion 2 -----------------------------------------------------------

#[test]
fn criterion_02_regression_self_consistency() {
    // The paper's printed pair: r = 0.542 entails r² = 0.294 at 3 d.p.
    let r: f64 = 0.542;
    assert_eq!((r * r * 1000.0).round() / 1000.0, 0.294);

    // trend_fit keeps the identity exactly.
    let x: Vec<f64> = (0..30).map(|i| i as f64).collect();
    let y: Vec<f64> = x.iter().map(|v| 0.3 * v + (v * 0.7).sin()).collect();
    let fit = trend_fit(&x, &y).unwrap();
    assert!((fit.r2 - fit.r * fit.r).abs() < 1e-12);

    // 20-point seeded noisy line vs an independent OLS + t-CDF oracle.
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let mut rng = Lcg::new(42);
    let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
    let y: Vec<f64> = x.iter().map(|v| 0.02 * v + 1.0 + (rng.next() - 0.5)).collect();
    let n = 20.0;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
    let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
    let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, n - 2.0).unwrap().cdf(t.abs()));
    assert!(p > 1e-6, "oracle p {p} too extreme for a fair 1e-9 comparison");

    let fit = trend_fit(&x, &y).unwrap();
    assert!((fit.slope - slope).abs() <= 1e-9 * slope.abs().max(1.0));
    assert!((fit.r - r).abs() <= 1e-9);
    assert!((fit.p - p).abs() <= 1e-9);
    println!(
        "ACCEPTANCE 2 PASS: r²(0.542) -> 0.294; slope/r/p within 1e-9 of the oracle (p {p:.4})"
    );
}

// --- Criterion 3 -----------------------------------------------------------

fn ideal_trail(seq: &[(Chord, usize)]) -> ChromaTrail {
    let mut frames = Vec::new();
    for &(chord, n) in seq {
        let pcs = chord_template(chord.root, chord.kind);
        for _ in 0..n {
            frames.push(ChromaFrame { pcs, energy: 1.0 });
        }
    }
    ChromaTrail::new(frames, HOP as f64 / 44100.0)
}

/// Chord tones voiced in the fifth octave.
fn chord_pitches(chord: Chord) -> Vec<f64> {
    chord
        .kind
        .intervals()
        .iter()
        .map(|&iv| 72.0 + chord.root.index() as f64 + iv as f64)
        .collect()
}

fn synth_progression(chords: &[Chord], step: f64) -> AudioBuffer {
    let mut out: Option<AudioBuffer> = None;
    for &c in chords {
        let seg = synth_chord(&chord_pitches(c), step).unwrap();
        out = Some(match out {
            Some(acc) => acc.concat(&seg),
            None => seg,
        });
    }
    out.unwrap()
}

fn add_noise_at_snr(signal: &AudioBuffer, snr_db: f64, seed: u64) -> AudioBuffer {
    let p_signal =
        signal.samples().iter().map(|s| s * s).sum::<f64>() / signal.len() as f64;
    let noise = synth_noise(signal.duration() + 0.1, seed).unwrap();
    let p_noise = noise.samples().iter().map(|s| s * s).sum::<f64>() / noise.len() as f64;
    let gain = (p_signal / (10f64.powf(snr_db / 10.0) * p_noise)).sqrt();
    signal.mix(&noise.scaled(gain))
}

#[test]
fn criterion_03_chord_detection_oracle() {
    let start = Instant::now();
    // (a) All 120 (root, type) combinations recover from ideal chroma.
    let mut recovered = 0;
    for root in 0..12 {
        for kind in ChordType::ALL {
            let chord = Chord::new(root, kind);
            let events = detect_chords(&ideal_trail(&[(chord, 130)])).unwrap();
            if events.len() == 1 && events[0].label == ChordLabel::Chord(chord) {
                recovered += 1;
            }
        }
    }
    assert_eq!(recovered, 120, "ideal-chroma recovery");

    // (b) >= 90% event accuracy on harmonically rich chords at 20 dB SNR.
    let progressions: Vec<Vec<Chord>> = vec![
        vec![
            Chord::new(0, ChordType::Major),
            Chord::new(5, ChordType::Major),
            Chord::new(7, ChordType::Dominant7),
            Chord::new(0, ChordType::Major),
            Chord::new(9, ChordType::Minor),
            Chord::new(5, ChordType::Major),
            Chord::new(7, ChordType::Major),
            Chord::new(0, ChordType::Major),
        ],
        vec![
            Chord::new(9, ChordType::Minor),
            Chord::new(2, ChordType::Minor),
            Chord::new(4, ChordType::Major),
            Chord::new(9, ChordType::Minor),
            Chord::new(5, ChordType::Major),
            Chord::new(7, ChordType::Major),
            Chord::new(4, ChordType::Dominant7),
            Chord::new(9, ChordType::Minor),
        ],
        vec![
            Chord::new(2, ChordType::Major),
            Chord::new(7, ChordType::Major),
            Chord::new(9, ChordType::Dominant7),
            Chord::new(2, ChordType::Major),
            Chord::new(11, ChordType::Minor),
            Chord::new(7, ChordType::Major),
            Chord::new(9, ChordType::Major),
            Chord::new(2, ChordType::Major),
        ],
        vec![
            Chord::new(4, ChordType::Minor),
            Chord::new(9, ChordType::Minor),
            Chord::new(11, ChordType::Major),
            Chord::new(4, ChordType::Minor),
            Chord::new(0, ChordType::Major),
            Chord::new(9, ChordType::Minor),
            Chord::new(11, ChordType::Dominant7),
            Chord::new(4, ChordType::Minor),
        ],
        vec![
            Chord::new(10, ChordType::Major),
            Chord::new(3, ChordType::Major),
            Chord::new(5, ChordType::Dominant7),
            Chord::new(10, ChordType::Major),
            Chord::new(7, ChordType::Minor),
            Chord::new(3, ChordType::Major),
            Chord::new(5, ChordType::Major),
            Chord::new(10, ChordType::Major),
        ],
    ];
    let step = 2.0;
    let mut correct = 0;
    let mut total = 0;
    for (i, progression) in progressions.iter().enumerate() {
        let clean = synth_progression(progression, step);
        let noisy = add_noise_at_snr(&clean, 20.0, 1000 + i as u64);
        let spec = stft(&noisy, FFT_SIZE, HOP).unwrap();
        let events = detect_chords(&chroma(&spec)).unwrap();
        for (k, &truth) in progression.iter().enumerate() {
            total += 1;
            let midpoint = (k as f64 + 0.5) * step;
            let hit = events
                .iter()
                .find(|e| e.start <= midpoint && midpoint < e.end)
                .and_then(|e| e.chord());
            if hit == Some(truth) {
                correct += 1;
            }
        }
    }
    let event_accuracy = correct as f64 / total as f64;
    assert!(
        event_accuracy >= 0.9,
        "event accuracy {event_accuracy} ({correct}/{total})"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 3 PASS: 120/120 ideal recovery; {correct}/{total} noisy events ({:.1}%), {elapsed:?}",
        event_accuracy * 100.0
    );
}

// --- Criterion 4 -----------------------------------------------------------

#[test]
fn criterion_04_key_finding_and_transposition() {
    // 11-chord diatonic progressions leave exactly one chord with the full
    // five-either-side context; 5 major + 5 minor transposed keys.
    let major_pattern: [(i32, ChordType); 11] = [
        (0, ChordType::Major),
        (5, ChordType::Major),
        (7, ChordType::Major),
        (0, ChordType::Major),
        (9, ChordType::Minor),
        (5, ChordType::Major),
        (7, ChordType::Major),
        (0, ChordType::Major),
        (5, ChordType::Major),
        (7, ChordType::Major),
        (0, ChordType::Major),
    ];
    let minor_pattern: [(i32, ChordType); 11] = [
        (0, ChordType::Minor),
        (5, ChordType::Minor),
        (7, ChordType::Major),
        (0, ChordType::Minor),
        (8, ChordType::Major),
        (5, ChordType::Minor),
        (7, ChordType::Major),
        (0, ChordType::Minor),
        (5, ChordType::Minor),
        (7, ChordType::Major),
        (0, ChordType::Minor),
    ];
    let mut interior_total = 0;
    let mut interior_correct = 0;
    for &tonic in &[0, 2, 4, 6, 9] {
        for (pattern, mode) in [(&major_pattern, Mode::Major), (&minor_pattern, Mode::Minor)] {
            let chords: Vec<Chord> = pattern
                .iter()
                .map(|&(offset, kind)| Chord::new(tonic + offset, kind))
                .collect();
            let keys = local_key(&chords, KEY_CONTEXT_CHORDS).unwrap();
            let expected = Key {
                tonic: PitchClass::new(tonic),
                mode,
            };
            interior_total += 1;
            if keys[5].key == expected {
                interior_correct += 1;
            }
        }
    }
    assert!(
        interior_correct >= 9,
        "interior keys {interior_correct}/{interior_total}"
    );

    // Audio-level transposition equivariance: the relative transition
    // histogram is identical under a global +k semitone shift.
    let base: Vec<Chord> = [
        (0, ChordType::Major),
        (9, ChordType::Minor),
        (5, ChordType::Major),
        (7, ChordType::Major),
        (0, ChordType::Major),
        (5, ChordType::Major),
        (7, ChordType::Major),
        (0, ChordType::Major),
    ]
    .iter()
    .map(|&(root, kind)| Chord::new(root, kind))
    .collect();
    let analyze = |shift: i32| -> (Vec<Chord>, TransitionHistogram) {
        let chords: Vec<Chord> = base.iter().map(|c| c.transposed(shift)).collect();
        let audio = synth_progression(&chords, 1.5);
        let events = detect_chords(&chroma(&stft(&audio, FFT_SIZE, HOP).unwrap())).unwrap();
        let detected = chords_of(&events);
        let keys = local_key(&detected, KEY_CONTEXT_CHORDS).unwrap();
        let keyed: Vec<Option<KeyEstimate>> = keys.iter().copied().map(Some).collect();
        let chord_events: Vec<ChordEvent> = events
            .into_iter()
            .filter(|e| e.chord().is_some())
            .collect();
        (detected, transition_histogram(&chord_events, &keyed).unwrap())
    };
    let (base_chords, base_hist) = analyze(0);
    assert_eq!(base_chords, base, "baseline detection recovers the progression");
    for shift in [3, 7] {
        let (shifted_chords, shifted_hist) = analyze(shift);
        let expect: Vec<Chord> = base.iter().map(|c| c.transposed(shift)).collect();
        assert_eq!(shifted_chords, expect, "shift {shift}");
        let base_cells: Vec<(TransitionCell, u64)> =
            base_hist.cells().map(|(c, n)| (*c, n)).collect();
        let shifted_cells: Vec<(TransitionCell, u64)> =
            shifted_hist.cells().map(|(c, n)| (*c, n)).collect();
        assert_eq!(base_cells, shifted_cells, "shift {shift}");
    }
    println!(
        "ACCEPTANCE 4 PASS: {interior_correct}/{interior_total} interior keys; relative histogram invariant under +3/+7"
    );
}

// --- Criterion 5 -----------------------------------------------------------

#[test]
fn criterion_05_rhythm_features() {
    let buf = synth_clicks(0.5, 10.0).unwrap();
    let trail = features::extract_features(&buf).unwrap();
    let spec = stft(&buf, FFT_SIZE, HOP).unwrap();
    let odf = features::onsets::spectral_flux(spec.frames());
    let onset_frames = features::onsets::pick_onsets(&odf);

    let mut checked = 0;
    for (i, frame) in trail.frames().iter().enumerate() {
        if frame.t < 3.0 || frame.t > 9.0 {
            continue;
        }
        checked += 1;
        // Exactly 4 onsets per trailing 2 s window; when the window's right
        // edge lands exactly on an onset the count is boundary-ambiguous.
        if !onset_frames.contains(&i) {
            assert_eq!(frame.values[idx::ONSET_COUNT_FULL], 4.0, "t={}", frame.t);
        }
        assert!((frame.values[idx::IOI_MEAN_FULL] - 0.5).abs() <= 0.03, "t={}", frame.t);
        assert!(frame.values[idx::IOI_STD_FULL] < 0.02, "t={}", frame.t);
        assert!((frame.values[idx::TEMPO] - 120.0).abs() <= 2.0, "t={}", frame.t);
    }
    assert!(checked > 200);

    // A 60 bpm train reports the metrical level nearest the 100-120 band.
    let slow = synth_clicks(1.0, 12.0).unwrap();
    let summary = features::song_summary(&features::extract_features(&slow).unwrap()).unwrap();
    let tempo = summary.means[idx::TEMPO];
    assert!((100.0..=122.0).contains(&tempo), "60 bpm folded to {tempo}");
    println!("ACCEPTANCE 5 PASS: 120 bpm clicks (count 4, IOI 0.5, tempo 120±2); 60 bpm folds to {tempo:.1}");
}

// --- Criterion 6 -----------------------------------------------------------

#[test]
fn criterion_06_spectral_features() {
    let sine = features::extract_features(&synth_tone(1000.0, 5.0, 0.8).unwrap()).unwrap();
    for frame in sine.frames() {
        assert!((frame.values[idx::CENTROID] - 1000.0).abs() <= 22.0, "t={}", frame.t);
        if frame.t >= 2.5 {
            assert!(frame.values[idx::JS_DIVERGENCE] < 1e-3, "t={}", frame.t);
        }
    }
    let sine_flatness = features::song_summary(&sine).unwrap().means[idx::FLATNESS];
    let noise = features::extract_features(&synth_noise(5.0, 42).unwrap()).unwrap();
    let noise_flatness = features::song_summary(&noise).unwrap().means[idx::FLATNESS];
    assert!(noise_flatness > 10.0 * sine_flatness);

    let fixtures = [
        AudioBuffer::new(vec![0.0; 3 * 44100], 44100),
        synth_tone(1000.0, 3.0, 0.8).unwrap(),
        synth_noise(3.0, 5).unwrap(),
        synth_clicks(0.5, 3.0).unwrap(),
    ];
    for buf in &fixtures {
        let trail = features::extract_features(buf).unwrap();
        for frame in trail.frames() {
            assert!(frame.values.iter().all(|v| v.is_finite()));
        }
    }
    println!(
        "ACCEPTANCE 6 PASS: centroid within 22 Hz, flatness ratio {:.1}, JSD < 1e-3, all finite",
        noise_flatness / sine_flatness
    );
}

// --- Criterion 7 -----------------------------------------------------------

#[test]
fn criterion_07_similarity_algebra() {
    let mut rng = Lcg::new(7);
    // Triangle inequality over 100 random normalized triples.
    let subset: Vec<usize> = (0..NUM_FEATURES).collect();
    for _ in 0..100 {
        let mut v = || -> Vec<f64> { (0..NUM_FEATURES).map(|_| rng.next()).collect() };
        let (a, b, c) = (v(), v(), v());
        let ab = trackline_core::corpus::distance(&a, &b, &subset).unwrap();
        let bc = trackline_core::corpus::distance(&b, &c, &subset).unwrap();
        let ac = trackline_core::corpus::distance(&a, &c, &subset).unwrap();
        assert!(ac <= ab + bc + 1e-12);
    }

    // Symmetric zero-diagonal matrices; idempotent unit-range normalization.
    let summaries: Vec<SongSummary> = (0..8)
        .map(|i| {
            let mut means = [0.0; NUM_FEATURES];
            for m in &mut means {
                *m = rng.next() * 50.0 - 25.0;
            }
            SongSummary {
                song_id: format!("s{i}"),
                means,
            }
        })
        .collect();
    let normalized = normalize_features(&summaries).unwrap();
    for f in 0..NUM_FEATURES {
        let col: Vec<f64> = normalized.iter().map(|s| s.means[f]).collect();
        let lo = col.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        let hi = col.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }
    let twice = normalize_features(&normalized).unwrap();
    for (a, b) in normalized.iter().zip(&twice) {
        for (x, y) in a.means.iter().zip(&b.means) {
            assert!((x - y).abs() < 1e-12);
        }
    }
    let matrix = similarity_matrix(&normalized, &FeatureSubset::All, Metric::Euclidean).unwrap();
    for i in 0..matrix.len() {
        assert_eq!(matrix.d[i][i], 0.0);
        for j in 0..matrix.len() {
            assert_eq!(matrix.d[i][j], matrix.d[j][i]);
        }
    }

    // Representativeness vs brute-force column sums on 10x10 matrices.
    #[allow(clippy::needless_range_loop)] // symmetric (i, j) fill
    for _ in 0..10 {
        let n = 10;
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = rng.next() * 5.0;
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        let m = SimilarityMatrix {
            labels: (0..n).map(|i| format!("e{i}")).collect(),
            d: d.clone(),
        };
        let ranked = representativeness(&m);
        let mut oracle: Vec<(String, f64)> = (0..n)
            .map(|i| (format!("e{i}"), (0..n).map(|j| d[j][i]).sum()))
            .collect();
        oracle.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(
            ranked.iter().map(|(l, _)| l).collect::<Vec<_>>(),
            oracle.iter().map(|(l, _)| l).collect::<Vec<_>>()
        );
    }
    println!("ACCEPTANCE 7 PASS: triangle inequality, idempotent [0,1] normalization, ranking matches oracle");
}

// --- Criterion 8 -----------------------------------------------------------

fn blob_dataset(seed: u64) -> SegmentDataset {
    let mut rng = Lcg::new(seed);
    let mut rows = Vec::new();
    for class in 0..2usize {
        let center = if class == 0 { 0.3 } else { 0.7 };
        for song in 0..10 {
            let song_id = format!("c{class}s{song}");
            for _ in 0..10 {
                rows.push(SegmentRow {
                    features: (0..NUM_FEATURES)
                        .map(|_| center + (rng.next() - 0.5) * 0.2)
                        .collect(),
                    label: class,
                    song_id: song_id.clone(),
                });
            }
        }
    }
    SegmentDataset::new(rows, vec!["a".into(), "b".into()]).unwrap()
}

#[test]
fn criterion_08_learning_suite() {
    // Gradient check against central differences over every parameter.
    let small = {
        let full = blob_dataset(11);
        let subset = full.select_features(&[0, 1, 2, 3]).unwrap();
        SegmentDataset::new(subset.rows[..24].to_vec(), subset.classes).unwrap()
    };
    let model = train_mlp(&small, 3, 5).unwrap();
    let g = model.gradients(&small).unwrap();
    let mut analytic = Vec::new();
    analytic.extend(g.w1.iter().flatten());
    analytic.extend(&g.b1);
    analytic.extend(g.w2.iter().flatten());
    analytic.extend(&g.b2);
    let step = 1e-5;
    let mut numeric = Vec::new();
    let mut param_index = 0;
    let mut probe = |count: usize, set: &dyn Fn(&mut trackline_core::learn::MlpModel, usize, f64)| {
        for k in 0..count {
            let mut plus = model.clone();
            set(&mut plus, k, step);
            let mut minus = model.clone();
            set(&mut minus, k, -step);
            numeric.push((plus.loss(&small).unwrap() - minus.loss(&small).unwrap()) / (2.0 * step));
            param_index += 1;
        }
    };
    let (input, hidden, output) = (model.input_dim(), model.hidden_dim(), model.output_dim());
    probe(input * hidden, &|m, k, d| m.w1[k / hidden][k % hidden] += d);
    probe(hidden, &|m, k, d| m.b1[k] += d);
    probe(hidden * output, &|m, k, d| m.w2[k / output][k % output] += d);
    probe(output, &|m, k, d| m.b2[k] += d);
    assert_eq!(param_index, analytic.len());
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = numeric.iter().zip(&analytic).map(|(n, a)| n - a).collect();
    let rel_error = norm(&diff) / (norm(&numeric) + norm(&analytic));
    assert!(rel_error < 1e-4, "gradient check rel error {rel_error}");

    // Both models reach 95% on separable blobs under a song-preserving split.
    let ds = blob_dataset(3);
    let (train, test) = song_preserving_split(&ds, 0.5, 1).unwrap();
    let labels: Vec<usize> = test.rows.iter().map(|r| r.label).collect();
    let mlp = train_mlp(&train, 1000, 9).unwrap();
    let mlp_preds: Vec<usize> = test
        .rows
        .iter()
        .map(|r| predict_mlp(&mlp, &r.features).unwrap())
        .collect();
    let mlp_acc = accuracy(&mlp_preds, &labels).unwrap();
    assert!(mlp_acc >= 0.95, "mlp accuracy {mlp_acc}");
    let nb = train_nb(&train).unwrap();
    let nb_preds: Vec<usize> = test
        .rows
        .iter()
        .map(|r| predict_nb(&nb, &r.features).unwrap())
        .collect();
    let nb_acc = accuracy(&nb_preds, &labels).unwrap();
    assert!(nb_acc >= 0.95, "nb accuracy {nb_acc}");

    // Song-preserving split: no overlap for 50 seeds.
    for seed in 0..50 {
        let (tr, te) = song_preserving_split(&ds, 0.5, seed).unwrap();
        let train_songs = tr.song_ids();
        for song in te.song_ids() {
            assert!(!train_songs.contains(&song), "seed {seed}");
        }
    }

    // Greedy selection finds the planted informative feature first.
    let mut rng = Lcg::new(99);
    let planted = 6usize;
    let mut rows = Vec::new();
    for class in 0..2usize {
        for song in 0..8 {
            for _ in 0..6 {
                rows.push(SegmentRow {
                    features: (0..10)
                        .map(|f| {
                            if f == planted {
                                class as f64 + (rng.next() - 0.5) * 0.4
                            } else {
                                rng.next()
                            }
                        })
                        .collect(),
                    label: class,
                    song_id: format!("g{class}s{song}"),
                });
            }
        }
    }
    let planted_ds = SegmentDataset::new(rows, vec!["x".into(), "y".into()]).unwrap();
    let selection = greedy_select(&planted_ds, ModelKind::Nb, 3, 2).unwrap();
    assert_eq!(selection.order[0], planted);

    // Chance baselines render per the 3-decimal-percent convention.
    assert_eq!(percent3(1.0 / 9.0), "11.111%");
    assert_eq!(percent3(1.0 / 15.0), "6.667%");
    println!(
        "ACCEPTANCE 8 PASS: gradient rel error {rel_error:.2e}; mlp {mlp_acc:.3}, nb {nb_acc:.3}; split clean over 50 seeds; greedy found f{planted}"
    );
}

// --- Criterion 9 -----------------------------------------------------------

fn twelve_song_spec() -> String {
    let mut text = String::from("song_id,kind,params,album,year,title\n");
    for i in 0..4 {
        text.push_str(&format!(
            "t{i},tone,freq={} dur=5 amp=0.7,PH,{},Tone {i}\n",
            330 + 60 * i,
            1994 + i % 2
        ));
        text.push_str(&format!(
            "n{i},noise,dur=5 seed={i},KID,{},Noise {i}\n",
            2000 + i % 2
        ));
        text.push_str(&format!(
            "c{i},clicks,period=0.{} dur=5,HTT,{},Clicks {i}\n",
            25 + 5 * i,
            2003 + 2 * (i % 2)
        ));
    }
    text
}

fn run_pipeline(dir: &Path, out_name: &str, workers: &str) -> PathBuf {
    let bin = env!("CARGO_BIN_EXE_trackline");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).current_dir(dir).output().unwrap();
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    let out_dir = dir.join(out_name);
    let out_str = out_dir.to_str().unwrap();
    run(&["synth", "--spec", "spec.csv", "--out", out_str, "--seed", "5"]);
    let manifest = format!("{out_str}/manifest.csv");
    run(&[
        "extract", "--manifest", &manifest, "--out", out_str, "--workers", workers, "--quiet",
    ]);
    run(&[
        "similarity", "--manifest", &manifest, "--out", out_str, "--subset", "all", "--level",
        "song",
    ]);
    run(&["trend", "--manifest", &manifest, "--out", out_str, "--stacked"]);
    run(&[
        "classify", "--manifest", &manifest, "--out", out_str, "--task", "era", "--model", "nb",
        "--seed", "1",
    ]);
    out_dir
}

fn collect_files(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().to_string();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn criterion_09_end_to_end_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("spec.csv"), twelve_song_spec()).unwrap();

    let a = run_pipeline(dir.path(), "run_a", "4");
    let b = run_pipeline(dir.path(), "run_b", "4");
    let single = run_pipeline(dir.path(), "run_single", "1");

    let files_a = collect_files(&a);
    let files_b = collect_files(&b);
    let files_single = collect_files(&single);
    assert!(!files_a.is_empty());
    assert_eq!(
        files_a.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        files_b.iter().map(|(n, _)| n).collect::<Vec<_>>()
    );
    for ((name_a, bytes_a), (name_b, bytes_b)) in files_a.iter().zip(&files_b) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between identical runs");
    }
    for ((name_a, bytes_a), (name_s, bytes_s)) in files_a.iter().zip(&files_single) {
        assert_eq!(name_a, name_s);
        assert_eq!(bytes_a, bytes_s, "{name_a} differs between 4 and 1 workers");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "pipeline took {elapsed:?}");
    println!(
        "ACCEPTANCE 9 PASS: {} files byte-identical across runs and worker counts, {elapsed:?}",
        files_a.len()
    );
}

// --- Criterion 10 ----------------------------------------------------------

fn trend_corpus(drift_feature: Option<usize>, seed: u64) -> (Vec<f64>, Vec<SongSummary>) {
    let mut rng = Lcg::new(seed);
    let years: Vec<f64> = (0..12).map(|i| 1993.0 + i as f64).collect();
    let summaries = years
        .iter()
        .enumerate()
        .map(|(i, &year)| {
            let mut means = [0.5; NUM_FEATURES];
            // Features 0-2 carry year-independent noise; everything else is
            // constant. A planted drift rides on its feature alone.
            for m in means.iter_mut().take(3) {
                *m = rng.next();
            }
            if let Some(f) = drift_feature {
                means[f] = 0.02 * (year - 1993.0) + 0.01 * rng.next();
            }
            SongSummary {
                song_id: format!("song{i}"),
                means,
            }
        })
        .collect();
    (years, summaries)
}

#[test]
fn criterion_10_trend_detection_power() {
    // Planted monotone drift in feature 2: lowest p, positive r.
    let (years, summaries) = trend_corpus(Some(idx::ENERGY_LOW), 500);
    let normalized = normalize_features(&summaries).unwrap();
    let fits: Vec<(usize, trackline_core::corpus::TrendFit)> = (0..NUM_FEATURES)
        .map(|f| {
            let values: Vec<f64> = normalized.iter().map(|s| s.means[f]).collect();
            (f, trend_fit(&years, &values).unwrap())
        })
        .collect();
    let best = fits
        .iter()
        .min_by(|a, b| a.1.p.total_cmp(&b.1.p))
        .unwrap();
    assert_eq!(best.0, idx::ENERGY_LOW, "lowest-p feature");
    assert!(best.1.r > 0.0, "planted sign");

    // Drift-free corpora: no feature under p = 0.01 in at least 95 of 100
    // seeded runs.
    let mut clean_runs = 0;
    for seed in 0..100 {
        let (years, summaries) = trend_corpus(None, seed);
        let normalized = normalize_features(&summaries).unwrap();
        let min_p = (0..NUM_FEATURES)
            .map(|f| {
                let values: Vec<f64> = normalized.iter().map(|s| s.means[f]).collect();
                trend_fit(&years, &values).unwrap().p
            })
            .fold(f64::INFINITY, f64::min);
        if min_p >= 0.01 {
            clean_runs += 1;
        }
    }
    assert!(clean_runs >= 95, "clean runs {clean_runs}/100");
    println!(
        "ACCEPTANCE 10 PASS: planted drift found with r > 0; {clean_runs}/100 null runs clean"
    );
}
