//! Whole-pipeline driver: extraction, harmonic analysis, similarity at both
//! levels, trend fits, and the representativeness ranking.

use super::{chords, extract, rank, similarity, trend};
use crate::{Level, Subset};
use anyhow::Result;
use std::path::Path;
use std::process::ExitCode;

pub fn run(manifest: &Path, out: &Path, workers: Option<usize>, quiet: bool) -> Result<ExitCode> {
    let mut worst = ExitCode::SUCCESS;
    let mut track = |code: ExitCode| {
        if code != ExitCode::SUCCESS {
            worst = code;
        }
    };
    track(extract::run(manifest, out, workers, quiet)?);
    track(chords::run(manifest, out, workers, quiet)?);
    track(similarity::run(manifest, None, out, Subset::All, Level::Song)?);
    track(similarity::run(manifest, None, out, Subset::All, Level::Album)?);
    track(trend::run(manifest, None, out, &[], true, 0.5)?);
    track(rank::run(&out.join("similarity_song_all.csv"), out)?);
    println!("report: pipeline complete -> {}", out.display());
    Ok(worst)
}
