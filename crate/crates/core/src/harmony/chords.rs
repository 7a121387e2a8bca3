//! Template matching from chroma frames to time-stamped chord events.

use super::chroma::ChromaTrail;
use super::{Chord, ChordEvent, ChordLabel, ChordType, HarmonyError, PitchClass};

/// Frames whose chroma energy falls below this fraction of the song maximum
/// are labeled no-chord.
pub const ENERGY_REL_THRESHOLD: f64 = 1e-4;
const ENERGY_ABS_FLOOR: f64 = 1e-10;
/// Mode-filter window for frame label smoothing.
const SMOOTHING_FRAMES: usize = 9;
/// Runs shorter than this are merged into the preceding event.
pub const MIN_EVENT_SECONDS: f64 = 0.2;
/// Extra weight on the root pitch class. Plain binary templates cannot tell
/// the inversion-related pairs apart (major6 vs minor7, minor6 vs minor7b5,
/// augmented vs its own rotations); emphasizing the root makes every
/// (root, type) template unique.
const ROOT_WEIGHT: f64 = 2.0;

/// L1-normalized detection template for one chord: chord tones weighted 1,
/// the root weighted `ROOT_WEIGHT`.
pub fn chord_template(root: PitchClass, kind: ChordType) -> [f64; 12] {
    let mut t = [0.0f64; 12];
    for &offset in kind.intervals() {
        let pc = root.transposed(offset as i32).index();
        t[pc] = if offset == 0 { ROOT_WEIGHT } else { 1.0 };
    }
    let sum: f64 = t.iter().sum();
    for v in &mut t {
        *v /= sum;
    }
    t
}

/// Cosine of chroma against a template. A raw inner product would favor
/// templates with fewer tones (a dominant-7th chroma scores higher against
/// the plain major template than its own); normalizing by both L2 norms
/// makes the generating template the unique maximum.
fn match_score(chroma: &[f64; 12], template: &[f64; 12], template_norm: f64) -> f64 {
    let dot: f64 = chroma.iter().zip(template).map(|(x, t)| x * t).sum();
    let chroma_norm: f64 = chroma.iter().map(|x| x * x).sum::<f64>().sqrt();
    if chroma_norm == 0.0 {
        0.0
    } else {
        dot / (chroma_norm * template_norm)
    }
}

fn all_templates() -> Vec<(Chord, [f64; 12], f64)> {
    let mut out = Vec::with_capacity(120);
    for root in 0..12 {
        for kind in ChordType::ALL {
            let chord = Chord::new(root, kind);
            let template = chord_template(chord.root, kind);
            let norm = template.iter().map(|t| t * t).sum::<f64>().sqrt();
            out.push((chord, template, norm));
        }
    }
    out
}

/// Fixed label ordering for deterministic mode-filter tie-breaks.
fn label_order(label: &ChordLabel) -> u32 {
    match label {
        ChordLabel::NoChord => 0,
        ChordLabel::Chord(c) => 1 + c.root.index() as u32 * 10 + c.kind.index() as u32,
    }
}

/// Most frequent label in the window, centered on `i` and truncated at the
/// edges; ties prefer the center frame's own label, then the smallest label.
fn mode_filter(labels: &[ChordLabel]) -> Vec<ChordLabel> {
    let half = SMOOTHING_FRAMES / 2;
    let n = labels.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let window = &labels[lo..hi];
            let count_of = |target: ChordLabel| window.iter().filter(|&&l| l == target).count();
            let max_count = window.iter().map(|&l| count_of(l)).max().unwrap();
            if count_of(labels[i]) == max_count {
                return labels[i];
            }
            window
                .iter()
                .copied()
                .filter(|&l| count_of(l) == max_count)
                .min_by_key(label_order)
                .unwrap()
        })
        .collect()
}

/// Best template match per frame, smoothed and merged into maximal runs.
pub fn detect_chords(trail: &ChromaTrail) -> Result<Vec<ChordEvent>, HarmonyError> {
    if trail.frames().is_empty() {
        return Err(HarmonyError::EmptyTrail);
    }
    let templates = all_templates();
    let max_energy = trail
        .frames()
        .iter()
        .fold(0.0f64, |m, f| m.max(f.energy));
    let gate = ENERGY_ABS_FLOOR.max(ENERGY_REL_THRESHOLD * max_energy);

    let labels: Vec<ChordLabel> = trail
        .frames()
        .iter()
        .map(|frame| {
            if frame.energy < gate {
                return ChordLabel::NoChord;
            }
            let mut best = ChordLabel::NoChord;
            let mut best_score = f64::NEG_INFINITY;
            for (chord, template, norm) in &templates {
                let score = match_score(&frame.pcs, template, *norm);
                if score > best_score {
                    best = ChordLabel::Chord(*chord);
                    best_score = score;
                }
            }
            best
        })
        .collect();

    let smoothed = mode_filter(&labels);
    let dt = trail.frame_period();

    // Maximal runs of one label.
    let mut runs: Vec<ChordEvent> = Vec::new();
    for (i, &label) in smoothed.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.label == label => run.end = (i + 1) as f64 * dt,
            _ => runs.push(ChordEvent {
                start: i as f64 * dt,
                end: (i + 1) as f64 * dt,
                label,
            }),
        }
    }

    // Merge sub-0.2 s runs into the preceding event; leading shorts fold
    // into the first kept event instead.
    let mut events: Vec<ChordEvent> = Vec::new();
    let mut pending_start: Option<f64> = None;
    for run in &runs {
        if run.duration() < MIN_EVENT_SECONDS {
            match events.last_mut() {
                Some(prev) => prev.end = run.end,
                None => {
                    pending_start.get_or_insert(run.start);
                }
            }
            continue;
        }
        let mut ev = run.clone();
        if let Some(s) = pending_start.take() {
            ev.start = s;
        }
        match events.last_mut() {
            Some(prev) if prev.label == ev.label => prev.end = ev.end,
            _ => events.push(ev),
        }
    }
    if events.is_empty() {
        // Nothing reached the minimum duration: keep the longest run,
        // stretched over the whole trail.
        let longest = runs
            .iter()
            .max_by(|a, b| a.duration().total_cmp(&b.duration()))
            .unwrap();
        events.push(ChordEvent {
            start: 0.0,
            end: smoothed.len() as f64 * dt,
            label: longest.label,
        });
    }
    Ok(events)
}
