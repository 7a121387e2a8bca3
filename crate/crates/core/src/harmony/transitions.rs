//! Functional chord-transition histogram and related corpus statistics.

use super::{ChordEvent, ChordType, HarmonyError, KeyEstimate};
use std::collections::BTreeMap;

/// One of the 14400 transition bins: roots are expressed relative to the
/// local tonic (0-11), types are the ten chord types at each end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionCell {
    pub start_root: u8,
    pub start_kind: ChordType,
    pub end_root: u8,
    pub end_kind: ChordType,
}

/// Counts over the 120 x 120 = 14400 cell space.
#[derive(Debug, Clone, Default)]
pub struct TransitionHistogram {
    counts: BTreeMap<TransitionCell, u64>,
    total: u64,
}

impl TransitionHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, cell: TransitionCell, count: u64) {
        if count > 0 {
            *self.counts.entry(cell).or_insert(0) += count;
            self.total += count;
        }
    }

    pub fn count(&self, cell: &TransitionCell) -> u64 {
        self.counts.get(cell).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn cells(&self) -> impl Iterator<Item = (&TransitionCell, u64)> {
        self.counts.iter().map(|(c, &n)| (c, n))
    }

    pub fn merge(&mut self, other: &TransitionHistogram) {
        for (cell, n) in other.cells() {
            self.insert(*cell, n);
        }
    }
}

/// Count same-key adjacent chord pairs. `keys[i]` must be None exactly where
/// `events[i]` is a no-chord; pairs touching a no-chord or straddling a key
/// change are skipped.
pub fn transition_histogram(
    events: &[ChordEvent],
    keys: &[Option<KeyEstimate>],
) -> Result<TransitionHistogram, HarmonyError> {
    if events.len() != keys.len() {
        return Err(HarmonyError::LengthMismatch(events.len(), keys.len()));
    }
    let mut hist = TransitionHistogram::new();
    for i in 0..events.len().saturating_sub(1) {
        let (Some(a), Some(b)) = (events[i].chord(), events[i + 1].chord()) else {
            continue;
        };
        let (Some(ka), Some(kb)) = (&keys[i], &keys[i + 1]) else {
            continue;
        };
        if ka.key != kb.key {
            continue;
        }
        let tonic = ka.key.tonic;
        hist.insert(
            TransitionCell {
                start_root: a.root.relative_to(tonic),
                start_kind: a.kind,
                end_root: b.root.relative_to(tonic),
                end_kind: b.kind,
            },
            1,
        );
    }
    Ok(hist)
}

/// Roman numeral for a relative root, flat spellings, case by type quality.
pub fn roman_label(rel_root: u8, kind: ChordType) -> String {
    const NUMERALS: [&str; 12] = [
        "I", "IIb", "II", "IIIb", "III", "IV", "Vb", "V", "VIb", "VI", "VIIb", "VII",
    ];
    let numeral = NUMERALS[rel_root as usize % 12];
    let cased = if kind.is_minor_quality() {
        numeral.to_lowercase()
    } else {
        numeral.to_string()
    };
    format!("{cased}{}", kind.roman_suffix())
}

/// Chord-name example with the tonic mapped to C, e.g. cell (5, major) as "F".
fn example_in_c(rel_root: u8, kind: ChordType) -> String {
    super::Chord::new(rel_root as i32, kind).name()
}

#[derive(Debug, Clone)]
pub struct TransitionRow {
    pub rank: usize,
    pub count: u64,
    pub proportion: f64,
    pub cell: TransitionCell,
    pub roman: String,
    pub example: String,
}

/// Top `n` cells by count (ties by ascending cell key), with proportions of
/// the histogram total.
pub fn rank_transitions(
    hist: &TransitionHistogram,
    n: usize,
) -> Result<Vec<TransitionRow>, HarmonyError> {
    if hist.is_empty() {
        return Err(HarmonyError::EmptyHistogram);
    }
    let mut cells: Vec<(TransitionCell, u64)> = hist.cells().map(|(c, n)| (*c, n)).collect();
    cells.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(cells
        .into_iter()
        .take(n)
        .enumerate()
        .map(|(i, (cell, count))| TransitionRow {
            rank: i + 1,
            count,
            proportion: count as f64 / hist.total() as f64,
            cell,
            roman: format!(
                "{}->{}",
                roman_label(cell.start_root, cell.start_kind),
                roman_label(cell.end_root, cell.end_kind)
            ),
            example: format!(
                "{}->{}",
                example_in_c(cell.start_root, cell.start_kind),
                example_in_c(cell.end_root, cell.end_kind)
            ),
        })
        .collect())
}

/// Plagal (IV->I) over perfect (V->I) major-cadence counts.
pub fn plagal_perfect_ratio(hist: &TransitionHistogram) -> Result<f64, HarmonyError> {
    let cell = |start_root| TransitionCell {
        start_root,
        start_kind: ChordType::Major,
        end_root: 0,
        end_kind: ChordType::Major,
    };
    let perfect = hist.count(&cell(7));
    if perfect == 0 {
        return Err(HarmonyError::UndefinedRatio);
    }
    Ok(hist.count(&cell(5)) as f64 / perfect as f64)
}

/// Counts per chord type over non-no-chord events, in enum order.
pub fn chord_type_histogram(events: &[ChordEvent]) -> [u64; 10] {
    let mut out = [0u64; 10];
    for chord in events.iter().filter_map(|e| e.chord()) {
        out[chord.kind.index()] += 1;
    }
    out
}

/// Counts per root pitch class over non-no-chord events.
pub fn chord_root_histogram(events: &[ChordEvent]) -> [u64; 12] {
    let mut out = [0u64; 12];
    for chord in events.iter().filter_map(|e| e.chord()) {
        out[chord.root.index()] += 1;
    }
    out
}

/// Per-year proportion of each chord type among that year's events.
pub fn type_usage_by_year(songs: &[(i32, Vec<ChordEvent>)]) -> BTreeMap<i32, [f64; 10]> {
    let mut counts: BTreeMap<i32, [u64; 10]> = BTreeMap::new();
    for (year, events) in songs {
        let entry = counts.entry(*year).or_insert([0; 10]);
        for (i, c) in chord_type_histogram(events).iter().enumerate() {
            entry[i] += c;
        }
    }
    counts
        .into_iter()
        .map(|(year, c)| {
            let total: u64 = c.iter().sum();
            let mut props = [0.0; 10];
            if total > 0 {
                for (p, n) in props.iter_mut().zip(&c) {
                    *p = *n as f64 / total as f64;
                }
            }
            (year, props)
        })
        .collect()
}

/// Mean gap in seconds between chord-change instants (successive non-no-chord
/// event starts).
pub fn harmonic_rhythm(events: &[ChordEvent]) -> Result<f64, HarmonyError> {
    let starts: Vec<f64> = events
        .iter()
        .filter(|e| e.chord().is_some())
        .map(|e| e.start)
        .collect();
    if starts.len() < 2 {
        return Err(HarmonyError::NotEnoughEvents {
            need: 2,
            got: starts.len(),
        });
    }
    let gaps: Vec<f64> = starts.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(gaps.iter().sum::<f64>() / gaps.len() as f64)
}
