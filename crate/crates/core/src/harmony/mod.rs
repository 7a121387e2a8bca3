//! Chord detection, local key estimation, and functional transition
//! statistics.
//!
//! Detection matches per-frame chroma against 121 templates (10 chord types
//! by 12 roots, plus a no-chord gate); keys come from Krumhansl-Kessler
//! profile correlation over a window of neighboring chords; transitions are
//! collected relative to the local tonic into a 120x120 histogram.

mod chords;
mod chroma;
mod io;
mod key;
mod transitions;

pub use chords::{chord_template, detect_chords, ENERGY_REL_THRESHOLD, MIN_EVENT_SECONDS};
pub use chroma::{chroma, ChromaFrame, ChromaTrail};
pub use io::{parse_lab, write_lab_chords, write_lab_keys, write_transition_csv};
pub use key::{local_key, KEY_CONTEXT_CHORDS, KK_MAJOR, KK_MINOR};
pub use transitions::{
    chord_root_histogram, chord_type_histogram, harmonic_rhythm, plagal_perfect_ratio,
    rank_transitions, transition_histogram, type_usage_by_year, TransitionCell,
    TransitionHistogram, TransitionRow,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarmonyError {
    #[error("chroma trail is empty")]
    EmptyTrail,
    #[error("chord sequence is empty")]
    EmptySequence,
    #[error("aligned sequences differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("transition histogram is empty")]
    EmptyHistogram,
    #[error("perfect-cadence count is zero; plagal/perfect ratio undefined")]
    UndefinedRatio,
    #[error("need at least {need} chord events, got {got}")]
    NotEnoughEvents { need: usize, got: usize },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    ParseLab {
        path: String,
        line: usize,
        detail: String,
    },
}

/// Pitch class 0-11 (C = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PitchClass(u8);

impl PitchClass {
    pub fn new(value: i32) -> Self {
        Self(value.rem_euclid(12) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn transposed(self, semitones: i32) -> Self {
        Self::new(self.0 as i32 + semitones)
    }

    /// Interval above `tonic`, in semitones 0-11.
    pub fn relative_to(self, tonic: PitchClass) -> u8 {
        (self.0 as i32 - tonic.0 as i32).rem_euclid(12) as u8
    }

    pub fn sharp_name(self) -> &'static str {
        ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"][self.index()]
    }

    pub fn flat_name(self) -> &'static str {
        ["C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B"][self.index()]
    }

    pub fn from_sharp_name(name: &str) -> Option<Self> {
        ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]
            .iter()
            .position(|&n| n == name)
            .map(|i| Self(i as u8))
    }
}

/// The ten chord types, each a fixed pitch-class template over its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordType {
    Major,
    Minor,
    Dominant7,
    Major7,
    Minor7,
    Diminished,
    Major6,
    Minor6,
    Minor7b5,
    Augmented,
}

impl ChordType {
    pub const ALL: [ChordType; 10] = [
        ChordType::Major,
        ChordType::Minor,
        ChordType::Dominant7,
        ChordType::Major7,
        ChordType::Minor7,
        ChordType::Diminished,
        ChordType::Major6,
        ChordType::Minor6,
        ChordType::Minor7b5,
        ChordType::Augmented,
    ];

    /// Chord tones as semitone offsets above the root.
    pub fn intervals(self) -> &'static [u8] {
        match self {
            ChordType::Major => &[0, 4, 7],
            ChordType::Minor => &[0, 3, 7],
            ChordType::Dominant7 => &[0, 4, 7, 10],
            ChordType::Major7 => &[0, 4, 7, 11],
            ChordType::Minor7 => &[0, 3, 7, 10],
            ChordType::Diminished => &[0, 3, 6],
            ChordType::Major6 => &[0, 4, 7, 9],
            ChordType::Minor6 => &[0, 3, 7, 9],
            ChordType::Minor7b5 => &[0, 3, 6, 10],
            ChordType::Augmented => &[0, 4, 8],
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).unwrap()
    }

    /// Lowercase roman numerals for the minor-third qualities.
    pub fn is_minor_quality(self) -> bool {
        matches!(
            self,
            ChordType::Minor
                | ChordType::Minor7
                | ChordType::Minor6
                | ChordType::Minor7b5
                | ChordType::Diminished
        )
    }

    /// Label suffix in .lab chord files.
    pub fn lab_suffix(self) -> &'static str {
        match self {
            ChordType::Major => "maj",
            ChordType::Minor => "min",
            ChordType::Dominant7 => "7",
            ChordType::Major7 => "maj7",
            ChordType::Minor7 => "min7",
            ChordType::Diminished => "dim",
            ChordType::Major6 => "maj6",
            ChordType::Minor6 => "min6",
            ChordType::Minor7b5 => "min7b5",
            ChordType::Augmented => "aug",
        }
    }

    pub fn from_lab_suffix(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|t| t.lab_suffix() == s)
    }

    /// Suffix in chord-name notation ("Fm", "Cmaj7", "Eb6").
    pub fn name_suffix(self) -> &'static str {
        match self {
            ChordType::Major => "",
            ChordType::Minor => "m",
            ChordType::Dominant7 => "7",
            ChordType::Major7 => "maj7",
            ChordType::Minor7 => "m7",
            ChordType::Diminished => "dim",
            ChordType::Major6 => "6",
            ChordType::Minor6 => "m6",
            ChordType::Minor7b5 => "m7b5",
            ChordType::Augmented => "aug",
        }
    }

    /// Suffix on roman numerals ("IVmaj7", "I7", "IV6").
    pub fn roman_suffix(self) -> &'static str {
        match self {
            ChordType::Major | ChordType::Minor => "",
            ChordType::Dominant7 | ChordType::Minor7 => "7",
            ChordType::Major7 => "maj7",
            ChordType::Major6 | ChordType::Minor6 => "6",
            ChordType::Diminished => "dim",
            ChordType::Minor7b5 => "7b5",
            ChordType::Augmented => "aug",
        }
    }
}

/// A root position chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    pub root: PitchClass,
    pub kind: ChordType,
}

impl Chord {
    pub fn new(root: i32, kind: ChordType) -> Self {
        Self {
            root: PitchClass::new(root),
            kind,
        }
    }

    pub fn transposed(self, semitones: i32) -> Self {
        Self {
            root: self.root.transposed(semitones),
            kind: self.kind,
        }
    }

    /// Chord-name notation with flat spelling, e.g. "Fm7".
    pub fn name(self) -> String {
        format!("{}{}", self.root.flat_name(), self.kind.name_suffix())
    }
}

/// Either a detected chord or the no-chord marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordLabel {
    NoChord,
    Chord(Chord),
}

/// Time-stamped chord span.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordEvent {
    pub start: f64,
    pub end: f64,
    pub label: ChordLabel,
}

impl ChordEvent {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn chord(&self) -> Option<Chord> {
        match self.label {
            ChordLabel::Chord(c) => Some(c),
            ChordLabel::NoChord => None,
        }
    }
}

/// Major or minor key context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Major,
    Minor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub tonic: PitchClass,
    pub mode: Mode,
}

impl Key {
    pub fn name(self) -> String {
        let mode = match self.mode {
            Mode::Major => "maj",
            Mode::Minor => "min",
        };
        format!("{}:{}", self.tonic.sharp_name(), mode)
    }
}

/// Best-matching key with its profile correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyEstimate {
    pub key: Key,
    pub score: f64,
}

/// The non-no-chord chords of an event sequence, in order.
pub fn chords_of(events: &[ChordEvent]) -> Vec<Chord> {
    events.iter().filter_map(|e| e.chord()).collect()
}
