//! Representativeness ranking from a similarity matrix.

use super::ensure_dir;
use anyhow::{Context, Result};
use std::path::Path;
use std::process::ExitCode;
use trackline_core::corpus::{read_matrix_csv, representativeness};

pub fn run(matrix_path: &Path, out: &Path) -> Result<ExitCode> {
    let matrix = read_matrix_csv(matrix_path)?;
    let ranked = representativeness(&matrix);
    ensure_dir(out)?;
    let mut writer =
        csv::Writer::from_path(out.join("rank.csv")).context("cannot write rank.csv")?;
    writer.write_record(["rank", "score", "label"])?;
    for (i, (label, score)) in ranked.iter().enumerate() {
        writer.write_record([&(i + 1).to_string(), &format!("{score:.6}"), label])?;
    }
    writer.flush()?;
    println!("rank: {} entities -> {}", ranked.len(), out.join("rank.csv").display());
    Ok(ExitCode::SUCCESS)
}
