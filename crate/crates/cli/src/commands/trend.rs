//! Chronological trend fits over per-song feature summaries.

use super::{ensure_dir, load_nonempty_manifest};
use crate::svg;
use anyhow::{bail, Context, Result};
use std::collections::HashSet;
use std::path::Path;
use std::process::ExitCode;
use trackline_core::corpus::{normalize_features, trend_fit, write_trend_csv, TrendFit};
use trackline_core::features::{read_summaries_csv, NUM_FEATURES};

pub fn run(
    manifest_path: &Path,
    summaries_path: Option<&Path>,
    out: &Path,
    plot_features: &[usize],
    stacked: bool,
    offset: f64,
) -> Result<ExitCode> {
    let manifest = load_nonempty_manifest(manifest_path)?;
    let default_summaries = out.join("summaries.csv");
    let summaries_path = summaries_path.unwrap_or(&default_summaries);
    let summaries = read_summaries_csv(summaries_path)
        .with_context(|| format!("run `extract` first: no usable {}", summaries_path.display()))?;
    for &f in plot_features {
        anyhow::ensure!(f < NUM_FEATURES, "feature index {f} out of range 0-40");
    }

    // Pair each summary with its release year; summaries stay in file order.
    let year_of = |id: &str| {
        manifest
            .iter()
            .find(|t| t.song_id == id)
            .map(|t| t.release_year)
    };
    let mut years: Vec<f64> = Vec::new();
    let mut kept = Vec::new();
    for s in &summaries {
        match year_of(&s.song_id) {
            Some(y) => {
                years.push(y as f64);
                kept.push(s.clone());
            }
            None => eprintln!("[trend] {} not in manifest; skipped", s.song_id),
        }
    }
    let distinct: HashSet<i64> = years.iter().map(|&y| y as i64).collect();
    if distinct.len() < 3 {
        bail!(
            "need at least 3 distinct release years for trend fitting, got {}",
            distinct.len()
        );
    }

    // Features are max-min normalized to [0, 1] before fitting; r and p are
    // unchanged by the affine rescale, slopes read in normalized units.
    let normalized = normalize_features(&kept)?;
    let mut rows: Vec<(usize, TrendFit)> = (0..NUM_FEATURES)
        .map(|f| {
            let values: Vec<f64> = normalized.iter().map(|s| s.means[f]).collect();
            trend_fit(&years, &values).map(|fit| (f, fit))
        })
        .collect::<Result<_, _>>()?;
    rows.sort_by(|a, b| a.1.p.total_cmp(&b.1.p).then(a.0.cmp(&b.0)));
    ensure_dir(out)?;
    write_trend_csv(&rows, out.join("trends.csv"))?;

    let chosen: Vec<usize> = if plot_features.is_empty() {
        rows.iter().take(4).map(|(f, _)| *f).collect()
    } else {
        plot_features.to_vec()
    };
    let mut series = Vec::new();
    for &f in &chosen {
        let fit = rows.iter().find(|(rf, _)| *rf == f).unwrap().1;
        let mut points: Vec<(f64, f64)> = years
            .iter()
            .zip(&normalized)
            .map(|(&y, s)| (y, s.means[f]))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        std::fs::write(
            out.join(format!("trend_f{f}.svg")),
            svg::scatter(&points, &fit, &format!("feature {f} by year")),
        )?;
        series.push((format!("f{f}"), points));
    }
    if stacked {
        std::fs::write(out.join("trends_stacked.svg"), svg::stacked_trails(&series, offset))?;
    }
    let (top_feature, top) = rows[0];
    println!(
        "trend: {} songs, top feature {top_feature} (r {:.3}, p {:.3e}) -> {}",
        kept.len(),
        top.r,
        top.p,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}
