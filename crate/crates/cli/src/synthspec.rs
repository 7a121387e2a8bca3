//! Synthetic-corpus spec files.
//!
//! One CSV row per song: `song_id,kind,params,album,year[,title]`.
//! Kinds and their space-separated `key=value` params:
//!   tone    freq=<Hz> dur=<s> [amp=<gain>]
//!   noise   dur=<s> [seed=<n>]
//!   clicks  period=<s> dur=<s>
//!   chords  prog=<C-Am-F-G> step=<s per chord>
//! Chord names use sharps or flats plus a type suffix from
//! {"", m, 7, maj7, m7, dim, 6, m6, m7b5, aug}.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::HashMap;
use std::path::Path;
use trackline_core::harmony::{Chord, ChordType, PitchClass};
use trackline_core::signal::{synth_chord, synth_clicks, synth_noise, synth_tone, AudioBuffer};

#[derive(Debug, Clone)]
pub struct SongSpec {
    pub song_id: String,
    pub kind: String,
    pub params: HashMap<String, String>,
    pub album: String,
    pub year: i32,
    pub title: String,
}

pub fn parse_spec(path: &Path) -> Result<Vec<SongSpec>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot open spec {}", path.display()))?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.with_context(|| format!("{}:{line}", path.display()))?;
        if record.len() < 5 {
            bail!("{}:{line}: expected song_id,kind,params,album,year[,title]", path.display());
        }
        let params = record[2]
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| anyhow!("{}:{line}: bad param {kv:?} (want key=value)", path.display()))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        let year: i32 = record[4]
            .parse()
            .with_context(|| format!("{}:{line}: bad year {:?}", path.display(), &record[4]))?;
        let song_id = record[0].to_string();
        out.push(SongSpec {
            title: record.get(5).filter(|t| !t.is_empty()).unwrap_or(&song_id).to_string(),
            song_id,
            kind: record[1].to_string(),
            params,
            album: record[3].to_string(),
            year,
        });
    }
    Ok(out)
}

fn param_f64(spec: &SongSpec, key: &str) -> Result<f64> {
    spec.params
        .get(key)
        .ok_or_else(|| anyhow!("song {:?}: missing param {key}", spec.song_id))?
        .parse()
        .with_context(|| format!("song {:?}: bad {key}", spec.song_id))
}

fn param_f64_or(spec: &SongSpec, key: &str, default: f64) -> Result<f64> {
    match spec.params.get(key) {
        Some(v) => v
            .parse()
            .with_context(|| format!("song {:?}: bad {key}", spec.song_id)),
        None => Ok(default),
    }
}

/// "F#m7" -> Chord; longest matching type suffix wins.
pub fn parse_chord_name(name: &str) -> Result<Chord> {
    let bytes = name.as_bytes();
    if bytes.is_empty() {
        bail!("empty chord name");
    }
    let letter_pc = match bytes[0] {
        b'C' => 0,
        b'D' => 2,
        b'E' => 4,
        b'F' => 5,
        b'G' => 7,
        b'A' => 9,
        b'B' => 11,
        other => bail!("bad chord root letter {:?}", other as char),
    };
    let mut rest = &name[1..];
    let mut pc = letter_pc;
    if let Some(r) = rest.strip_prefix('#') {
        pc += 1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('b') {
        pc -= 1;
        rest = r;
    }
    let mut candidates: Vec<(&str, ChordType)> = ChordType::ALL
        .iter()
        .map(|&t| (t.name_suffix(), t))
        .collect();
    candidates.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
    let kind = candidates
        .into_iter()
        .find(|(suffix, _)| rest == *suffix)
        .map(|(_, t)| t)
        .ok_or_else(|| anyhow!("unknown chord type suffix {rest:?} in {name:?}"))?;
    Ok(Chord {
        root: PitchClass::new(pc),
        kind,
    })
}

/// Chord tones voiced compactly in the fifth octave, where the canonical
/// 2048-point analysis resolves neighboring semitones cleanly.
fn chord_pitches(chord: &Chord) -> Vec<f64> {
    chord
        .kind
        .intervals()
        .iter()
        .map(|&iv| 72.0 + chord.root.index() as f64 + iv as f64)
        .collect()
}

/// Render one spec row to audio. `fallback_seed` feeds unseeded noise rows.
pub fn render(spec: &SongSpec, fallback_seed: u64) -> Result<AudioBuffer> {
    let buffer = match spec.kind.as_str() {
        "tone" => synth_tone(
            param_f64(spec, "freq")?,
            param_f64(spec, "dur")?,
            param_f64_or(spec, "amp", 0.8)?,
        )?,
        "noise" => {
            let seed = match spec.params.get("seed") {
                Some(v) => v.parse().with_context(|| format!("song {:?}: bad seed", spec.song_id))?,
                None => fallback_seed,
            };
            synth_noise(param_f64(spec, "dur")?, seed)?
        }
        "clicks" => synth_clicks(param_f64(spec, "period")?, param_f64(spec, "dur")?)?,
        "chords" => {
            let prog = spec
                .params
                .get("prog")
                .ok_or_else(|| anyhow!("song {:?}: missing param prog", spec.song_id))?;
            let step = param_f64(spec, "step")?;
            let mut rendered: Option<AudioBuffer> = None;
            for name in prog.split('-') {
                let chord = parse_chord_name(name)
                    .with_context(|| format!("song {:?}", spec.song_id))?;
                let segment = synth_chord(&chord_pitches(&chord), step)?;
                rendered = Some(match rendered {
                    Some(acc) => acc.concat(&segment),
                    None => segment,
                });
            }
            rendered.ok_or_else(|| anyhow!("song {:?}: empty progression", spec.song_id))?
        }
        other => bail!("song {:?}: unknown kind {other:?}", spec.song_id),
    };
    Ok(buffer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chords_are_voiced_in_octave_five() {
        let c = parse_chord_name("C").unwrap();
        assert_eq!(chord_pitches(&c), vec![72.0, 76.0, 79.0]);
    }

    #[test]
    fn chord_names_parse() {
        let c = parse_chord_name("C").unwrap();
        assert_eq!((c.root.index(), c.kind), (0, ChordType::Major));
        let am = parse_chord_name("Am").unwrap();
        assert_eq!((am.root.index(), am.kind), (9, ChordType::Minor));
        let fs = parse_chord_name("F#m7").unwrap();
        assert_eq!((fs.root.index(), fs.kind), (6, ChordType::Minor7));
        let bb = parse_chord_name("Bbmaj7").unwrap();
        assert_eq!((bb.root.index(), bb.kind), (10, ChordType::Major7));
        let half_dim = parse_chord_name("Cm7b5").unwrap();
        assert_eq!(half_dim.kind, ChordType::Minor7b5);
        assert!(parse_chord_name("Hx").is_err());
        assert!(parse_chord_name("Cwat").is_err());
    }

    #[test]
    fn progression_duration_adds_up() {
        let spec = SongSpec {
            song_id: "p".into(),
            kind: "chords".into(),
            params: [("prog", "C-F-G-C"), ("step", "2")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            album: "X".into(),
            year: 2000,
            title: "p".into(),
        };
        let buf = render(&spec, 0).unwrap();
        assert_eq!(buf.len(), 8 * 44100);
    }

    #[test]
    fn seeded_rows_are_reproducible() {
        let spec = SongSpec {
            song_id: "n".into(),
            kind: "noise".into(),
            params: [("dur", "1"), ("seed", "5")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            album: "X".into(),
            year: 2000,
            title: "n".into(),
        };
        assert_eq!(render(&spec, 0).unwrap(), render(&spec, 99).unwrap());
    }
}
