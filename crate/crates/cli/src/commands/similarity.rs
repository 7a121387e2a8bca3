//! Similarity matrix export: CSV plus the shaded, distance-labeled SVG.

use super::{ensure_dir, load_nonempty_manifest};
use crate::svg;
use crate::{Level, Subset};
use anyhow::{Context, Result};
use std::path::Path;
use std::process::ExitCode;
use trackline_core::corpus::{
    album_matrix, normalize_features, similarity_matrix, write_matrix_csv, Metric,
};
use trackline_core::features::read_summaries_csv;

pub fn run(
    manifest_path: &Path,
    summaries_path: Option<&Path>,
    out: &Path,
    subset: Subset,
    level: Level,
) -> Result<ExitCode> {
    let manifest = load_nonempty_manifest(manifest_path)?;
    let default_summaries = out.join("summaries.csv");
    let summaries_path = summaries_path.unwrap_or(&default_summaries);
    let summaries = read_summaries_csv(summaries_path)
        .with_context(|| format!("run `extract` first: no usable {}", summaries_path.display()))?;
    let normalized = normalize_features(&summaries)?;
    let core_subset = subset.to_core();
    let (matrix, level_name) = match level {
        Level::Song => (
            similarity_matrix(&normalized, &core_subset, Metric::Euclidean)?,
            "song",
        ),
        Level::Album => (
            album_matrix(&normalized, &manifest, &core_subset, Metric::Euclidean)?,
            "album",
        ),
    };
    ensure_dir(out)?;
    let stem = format!("similarity_{level_name}_{}", core_subset.name());
    write_matrix_csv(&matrix, out.join(format!("{stem}.csv")))?;
    let title = format!("{level_name} similarity, {} features", core_subset.name());
    std::fs::write(out.join(format!("{stem}.svg")), svg::heatmap(&matrix, &title))
        .context("write heatmap")?;
    println!(
        "similarity: {} {level_name} entities, subset {} -> {}",
        matrix.len(),
        core_subset.name(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}
