//! Generate the synthetic corpus: one WAV per spec row plus a manifest.

use super::ensure_dir;
use crate::synthspec::{parse_spec, render};
use anyhow::{Context, Result};
use std::path::Path;
use std::process::ExitCode;
use trackline_core::signal::save_wav;

pub fn run(spec_path: &Path, out: &Path, seed: u64) -> Result<ExitCode> {
    let specs = parse_spec(spec_path)?;
    anyhow::ensure!(!specs.is_empty(), "no songs in spec {}", spec_path.display());
    let audio_dir = out.join("audio");
    ensure_dir(&audio_dir)?;

    let mut manifest = csv::Writer::from_path(out.join("manifest.csv"))
        .with_context(|| format!("cannot write manifest under {}", out.display()))?;
    manifest.write_record(["song_id", "path", "title", "album", "year"])?;
    for (i, song) in specs.iter().enumerate() {
        let buffer = render(song, seed.wrapping_add(i as u64))?;
        let rel = format!("audio/{}.wav", song.song_id);
        save_wav(&buffer, audio_dir.join(format!("{}.wav", song.song_id)))?;
        manifest.write_record([
            song.song_id.as_str(),
            rel.as_str(),
            song.title.as_str(),
            song.album.as_str(),
            &song.year.to_string(),
        ])?;
    }
    manifest.flush()?;
    println!("synth: {} songs -> {}", specs.len(), out.display());
    Ok(ExitCode::SUCCESS)
}
