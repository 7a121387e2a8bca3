//! Per-feature Spearman comparison between two versions of a track list.

use super::ensure_dir;
use anyhow::Result;
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use trackline_core::corpus::compare_versions;
use trackline_core::features::{read_summaries_csv, NUM_FEATURES};

pub fn run(summaries_a: &Path, summaries_b: &Path, out: &Path) -> Result<ExitCode> {
    let a = read_summaries_csv(summaries_a)?;
    let b = read_summaries_csv(summaries_b)?;
    ensure_dir(out)?;
    let mut text = String::from("feature,spearman\n");
    for f in 0..NUM_FEATURES {
        let rho = compare_versions(&a, &b, f)?;
        writeln!(text, "f{f},{rho:.6}").unwrap();
    }
    std::fs::write(out.join("compare.csv"), text)?;
    println!(
        "compare: {} tracks over {NUM_FEATURES} features -> {}",
        a.len(),
        out.join("compare.csv").display()
    );
    Ok(ExitCode::SUCCESS)
}
