//! Chord/key label files and the transition report.
//!
//! Chord files are tab-separated ".lab"-style lines `start\tend\tlabel` with
//! labels like `C:maj`, `F#:min7`, or `N`; key files mirror the layout with
//! labels like `C:maj-key`.

use super::{
    ChordEvent, ChordLabel, ChordType, HarmonyError, KeyEstimate, PitchClass, TransitionRow,
};
use std::fs;
use std::path::Path;

fn label_string(label: &ChordLabel) -> String {
    match label {
        ChordLabel::NoChord => "N".to_string(),
        ChordLabel::Chord(c) => format!("{}:{}", c.root.sharp_name(), c.kind.lab_suffix()),
    }
}

pub fn write_lab_chords(events: &[ChordEvent], path: impl AsRef<Path>) -> Result<(), HarmonyError> {
    let path = path.as_ref();
    let mut out = String::new();
    for e in events {
        out.push_str(&format!("{:.6}\t{:.6}\t{}\n", e.start, e.end, label_string(&e.label)));
    }
    fs::write(path, out).map_err(|source| HarmonyError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Key spans for the non-no-chord events; `keys` is aligned with `events`
/// and None exactly at no-chord positions.
pub fn write_lab_keys(
    events: &[ChordEvent],
    keys: &[Option<KeyEstimate>],
    path: impl AsRef<Path>,
) -> Result<(), HarmonyError> {
    if events.len() != keys.len() {
        return Err(HarmonyError::LengthMismatch(events.len(), keys.len()));
    }
    let path = path.as_ref();
    let mut out = String::new();
    for (e, k) in events.iter().zip(keys) {
        if let Some(k) = k {
            out.push_str(&format!(
                "{:.6}\t{:.6}\t{}-key\n",
                e.start,
                e.end,
                k.key.name()
            ));
        }
    }
    fs::write(path, out).map_err(|source| HarmonyError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_lab(path: impl AsRef<Path>) -> Result<Vec<ChordEvent>, HarmonyError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| HarmonyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let err = |line: usize, detail: String| HarmonyError::ParseLab {
        path: path.display().to_string(),
        line,
        detail,
    };
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(err(i + 1, "expected 3 tab-separated fields".into()));
        }
        let start: f64 = fields[0]
            .parse()
            .map_err(|e| err(i + 1, format!("bad start: {e}")))?;
        let end: f64 = fields[1]
            .parse()
            .map_err(|e| err(i + 1, format!("bad end: {e}")))?;
        let label = if fields[2] == "N" {
            ChordLabel::NoChord
        } else {
            let (root, kind) = fields[2]
                .split_once(':')
                .ok_or_else(|| err(i + 1, format!("bad label {:?}", fields[2])))?;
            let root = PitchClass::from_sharp_name(root)
                .ok_or_else(|| err(i + 1, format!("unknown root {root:?}")))?;
            let kind = ChordType::from_lab_suffix(kind)
                .ok_or_else(|| err(i + 1, format!("unknown chord type {kind:?}")))?;
            ChordLabel::Chord(super::Chord { root, kind })
        };
        events.push(ChordEvent { start, end, label });
    }
    Ok(events)
}

/// Table-style transition report.
pub fn write_transition_csv(
    rows: &[TransitionRow],
    path: impl AsRef<Path>,
) -> Result<(), HarmonyError> {
    let path = path.as_ref();
    let mut out = String::from(
        "rank,count,proportion,start_root,end_root,start_type,end_type,roman,example_in_C\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.4},{},{},{},{},{},{}\n",
            r.rank,
            r.count,
            r.proportion,
            r.cell.start_root,
            r.cell.end_root,
            r.cell.start_kind.lab_suffix(),
            r.cell.end_kind.lab_suffix(),
            r.roman,
            r.example
        ));
    }
    fs::write(path, out).map_err(|source| HarmonyError::Io {
        path: path.display().to_string(),
        source,
    })
}
