pub mod chords;
pub mod classify;
pub mod compare;
pub mod extract;
pub mod rank;
pub mod report;
pub mod similarity;
pub mod synth;
pub mod trend;

use anyhow::{Context, Result};
use std::path::{Path, PathBuf};
use trackline_core::corpus::TrackMeta;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

/// Manifest audio paths resolve relative to the manifest's own directory.
pub fn resolve_audio_path(manifest: &Path, track: &TrackMeta) -> PathBuf {
    if track.path.is_absolute() {
        track.path.clone()
    } else {
        manifest.parent().unwrap_or(Path::new(".")).join(&track.path)
    }
}

pub fn load_nonempty_manifest(path: &Path) -> Result<Vec<TrackMeta>> {
    let manifest = trackline_core::corpus::load_manifest(path)?;
    anyhow::ensure!(!manifest.is_empty(), "no tracks in manifest {}", path.display());
    Ok(manifest)
}
