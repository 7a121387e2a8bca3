//! Per-song feature trails and the corpus summary table.

use super::{ensure_dir, load_nonempty_manifest, resolve_audio_path};
use crate::pool::{default_workers, ordered_map};
use anyhow::Result;
use std::path::Path;
use std::process::ExitCode;
use trackline_core::features::{
    extract_features, song_summary, write_summaries_csv, write_trail_csv, SongSummary,
};
use trackline_core::signal::load_audio;

pub fn run(manifest_path: &Path, out: &Path, workers: Option<usize>, quiet: bool) -> Result<ExitCode> {
    let manifest = load_nonempty_manifest(manifest_path)?;
    let trails_dir = out.join("trails");
    ensure_dir(&trails_dir)?;
    let workers = workers.unwrap_or_else(default_workers);

    let results: Vec<Result<SongSummary, String>> = ordered_map(&manifest, workers, |_, track| {
        let path = resolve_audio_path(manifest_path, track);
        let go = || -> Result<SongSummary> {
            let audio = load_audio(&path)?;
            let mut trail = extract_features(&audio)?;
            trail.set_song_id(&track.song_id);
            write_trail_csv(&trail, trails_dir.join(format!("{}.csv", track.song_id)))?;
            let summary = song_summary(&trail)?;
            if !quiet {
                eprintln!(
                    "[extract] {}: {} frames, {:.1} s",
                    track.song_id,
                    trail.frames().len(),
                    audio.duration()
                );
            }
            Ok(summary)
        };
        go().map_err(|e| format!("{}: {e:#}", track.song_id))
    });

    let mut summaries = Vec::new();
    let mut failures = 0usize;
    for result in results {
        match result {
            Ok(summary) => summaries.push(summary),
            Err(message) => {
                failures += 1;
                eprintln!("[extract] FAILED {message}");
            }
        }
    }
    if !summaries.is_empty() {
        write_summaries_csv(&summaries, out.join("summaries.csv"))?;
    }
    println!(
        "extract: {} ok, {} failed -> {}",
        summaries.len(),
        failures,
        out.display()
    );
    Ok(if failures > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
