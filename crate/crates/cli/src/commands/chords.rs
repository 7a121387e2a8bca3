//! Chord events, local keys, and corpus-level transition statistics.

use super::{ensure_dir, load_nonempty_manifest, resolve_audio_path};
use crate::pool::{default_workers, ordered_map};
use anyhow::{Context, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use trackline_core::harmony::{
    chord_root_histogram, chord_type_histogram, chords_of, chroma, detect_chords, harmonic_rhythm,
    local_key, rank_transitions, transition_histogram, type_usage_by_year, write_lab_chords,
    write_lab_keys, write_transition_csv, ChordEvent, ChordType, KeyEstimate,
    TransitionHistogram, KEY_CONTEXT_CHORDS,
};
use trackline_core::signal::{load_audio, stft, FFT_SIZE, HOP};

struct SongHarmony {
    events: Vec<ChordEvent>,
    histogram: TransitionHistogram,
    year: i32,
}

/// Keys for the non-no-chord events, scattered back into event positions.
fn aligned_keys(events: &[ChordEvent], keys: &[KeyEstimate]) -> Vec<Option<KeyEstimate>> {
    let mut it = keys.iter().copied();
    events
        .iter()
        .map(|e| e.chord().map(|_| it.next().expect("one key per chord event")))
        .collect()
}

pub fn run(manifest_path: &Path, out: &Path, workers: Option<usize>, quiet: bool) -> Result<ExitCode> {
    let manifest = load_nonempty_manifest(manifest_path)?;
    let chords_dir = out.join("chords");
    let keys_dir = out.join("keys");
    ensure_dir(&chords_dir)?;
    ensure_dir(&keys_dir)?;
    let workers = workers.unwrap_or_else(default_workers);

    let results: Vec<Result<SongHarmony, String>> = ordered_map(&manifest, workers, |_, track| {
        let go = || -> Result<SongHarmony> {
            let audio = load_audio(resolve_audio_path(manifest_path, track))?;
            let spec = stft(&audio, FFT_SIZE, HOP)?;
            let events = detect_chords(&chroma(&spec))?;
            write_lab_chords(&events, chords_dir.join(format!("{}.lab", track.song_id)))?;
            let chords = chords_of(&events);
            let keyed = if chords.is_empty() {
                vec![None; events.len()]
            } else {
                let keys = local_key(&chords, KEY_CONTEXT_CHORDS)?;
                let keyed = aligned_keys(&events, &keys);
                write_lab_keys(&events, &keyed, keys_dir.join(format!("{}.lab", track.song_id)))?;
                keyed
            };
            let histogram = transition_histogram(&events, &keyed)?;
            if !quiet {
                eprintln!(
                    "[chords] {}: {} events, {} in-key transitions",
                    track.song_id,
                    events.len(),
                    histogram.total()
                );
            }
            Ok(SongHarmony {
                events,
                histogram,
                year: track.release_year,
            })
        };
        go().map_err(|e| format!("{}: {e:#}", track.song_id))
    });

    let mut songs: Vec<SongHarmony> = Vec::new();
    let mut failures = 0usize;
    for result in results {
        match result {
            Ok(s) => songs.push(s),
            Err(message) => {
                failures += 1;
                eprintln!("[chords] FAILED {message}");
            }
        }
    }

    let mut total = TransitionHistogram::new();
    for s in &songs {
        total.merge(&s.histogram);
    }
    if total.is_empty() {
        eprintln!("[chords] no in-key transitions found; transition report is empty");
        std::fs::write(
            out.join("transitions.csv"),
            "rank,count,proportion,start_root,end_root,start_type,end_type,roman,example_in_C\n",
        )?;
    } else {
        write_transition_csv(&rank_transitions(&total, 20)?, out.join("transitions.csv"))?;
    }

    let all_events: Vec<ChordEvent> = songs.iter().flat_map(|s| s.events.clone()).collect();
    let type_hist = chord_type_histogram(&all_events);
    let mut text = String::from("type,count\n");
    for (kind, count) in ChordType::ALL.iter().zip(type_hist) {
        writeln!(text, "{},{count}", kind.lab_suffix()).unwrap();
    }
    std::fs::write(out.join("chord_types.csv"), text).context("chord_types.csv")?;

    let root_hist = chord_root_histogram(&all_events);
    let mut text = String::from("root,count\n");
    for (pc, count) in root_hist.iter().enumerate() {
        let name = trackline_core::harmony::PitchClass::new(pc as i32).sharp_name();
        writeln!(text, "{name},{count}").unwrap();
    }
    std::fs::write(out.join("chord_roots.csv"), text).context("chord_roots.csv")?;

    let by_year: Vec<(i32, Vec<ChordEvent>)> =
        songs.iter().map(|s| (s.year, s.events.clone())).collect();
    let usage = type_usage_by_year(&by_year);
    let mut text = String::from("year");
    for kind in ChordType::ALL {
        write!(text, ",{}", kind.lab_suffix()).unwrap();
    }
    text.push('\n');
    for (year, props) in &usage {
        write!(text, "{year}").unwrap();
        for p in props {
            write!(text, ",{p:.4}").unwrap();
        }
        text.push('\n');
    }
    std::fs::write(out.join("chord_types_by_year.csv"), text).context("chord_types_by_year.csv")?;

    // Harmonic rhythm per year: mean of per-song mean chord gaps.
    let mut gaps: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for s in &songs {
        if let Ok(gap) = harmonic_rhythm(&s.events) {
            gaps.entry(s.year).or_default().push(gap);
        }
    }
    let mut text = String::from("year,mean_gap_seconds,songs\n");
    for (year, song_gaps) in &gaps {
        let mean = song_gaps.iter().sum::<f64>() / song_gaps.len() as f64;
        writeln!(text, "{year},{mean:.4},{}", song_gaps.len()).unwrap();
    }
    std::fs::write(out.join("harmonic_rhythm_by_year.csv"), text)
        .context("harmonic_rhythm_by_year.csv")?;

    println!(
        "chords: {} ok, {} failed, {} in-key transitions -> {}",
        songs.len(),
        failures,
        total.total(),
        out.display()
    );
    Ok(if failures > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
