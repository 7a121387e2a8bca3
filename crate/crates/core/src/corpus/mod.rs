//! Corpus metadata, feature normalization, similarity matrices,
//! representativeness ranking, and chronological statistics.

mod distance;
mod io;
mod stats;

pub use distance::{
    album_matrix, distance, distance_with, representativeness, similarity_matrix, FeatureSubset,
    Metric, SimilarityMatrix,
};
pub use io::{read_matrix_csv, write_matrix_csv, write_trend_csv};
pub use stats::{spearman, trend_fit, TrendFit};

use crate::features::{SongSummary, NUM_FEATURES};
use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Manifest {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("no summaries given")]
    EmptySummaries,
    #[error("feature index {0} out of range (0-{max})", max = NUM_FEATURES - 1)]
    BadFeatureIndex(usize),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("x values are all equal; no trend is defined")]
    ZeroXVariance,
    #[error("track lists do not match: {0}")]
    TrackMismatch(String),
}

/// One manifest row: where a song's audio lives and how it is labeled.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackMeta {
    pub song_id: String,
    pub path: PathBuf,
    pub title: String,
    pub album: String,
    pub release_year: i32,
}

/// Parse and validate a manifest CSV with header `song_id,path,title,album,year`.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<TrackMeta>, CorpusError> {
    let path = path.as_ref();
    let err = |line: usize, detail: String| CorpusError::Manifest {
        path: path.display().to_string(),
        line,
        detail,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => CorpusError::Io {
                path: path.display().to_string(),
                source,
            },
            other => err(0, format!("{other:?}")),
        })?;
    {
        let headers = reader.headers().map_err(|e| err(1, e.to_string()))?;
        let expect = ["song_id", "path", "title", "album", "year"];
        for name in expect {
            if !headers.iter().any(|h| h == name) {
                return Err(err(1, format!("missing column {name:?}")));
            }
        }
        if headers.len() != expect.len() {
            return Err(err(1, format!("expected columns {expect:?}")));
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| err(line, e.to_string()))?;
        if record.len() != 5 {
            return Err(err(line, "expected 5 fields".into()));
        }
        let year: i32 = record[4]
            .parse()
            .map_err(|_| err(line, format!("year {:?} is not an integer", &record[4])))?;
        if !(1900..=2100).contains(&year) {
            return Err(err(line, format!("year {year} outside plausible range 1900-2100")));
        }
        let song_id = record[0].to_string();
        if song_id.is_empty() {
            return Err(err(line, "empty song_id".into()));
        }
        if !seen.insert(song_id.clone()) {
            return Err(err(line, format!("duplicate song_id {song_id:?}")));
        }
        out.push(TrackMeta {
            song_id,
            path: PathBuf::from(&record[1]),
            title: record[2].to_string(),
            album: record[3].to_string(),
            release_year: year,
        });
    }
    Ok(out)
}

/// Max-min normalize each feature column to [0, 1] over the corpus; a
/// constant column maps to all zeros.
pub fn normalize_features(summaries: &[SongSummary]) -> Result<Vec<SongSummary>, CorpusError> {
    if summaries.is_empty() {
        return Err(CorpusError::EmptySummaries);
    }
    let mut mins = [f64::INFINITY; NUM_FEATURES];
    let mut maxs = [f64::NEG_INFINITY; NUM_FEATURES];
    for s in summaries {
        for i in 0..NUM_FEATURES {
            mins[i] = mins[i].min(s.means[i]);
            maxs[i] = maxs[i].max(s.means[i]);
        }
    }
    Ok(summaries
        .iter()
        .map(|s| {
            let mut means = [0.0; NUM_FEATURES];
            for i in 0..NUM_FEATURES {
                let range = maxs[i] - mins[i];
                means[i] = if range > 0.0 {
                    (s.means[i] - mins[i]) / range
                } else {
                    0.0
                };
            }
            SongSummary {
                song_id: s.song_id.clone(),
                means,
            }
        })
        .collect())
}

/// Per-feature Spearman correlation between two versions of the same track
/// list (same ordering, same length).
pub fn compare_versions(
    a: &[SongSummary],
    b: &[SongSummary],
    feature: usize,
) -> Result<f64, CorpusError> {
    if feature >= NUM_FEATURES {
        return Err(CorpusError::BadFeatureIndex(feature));
    }
    if a.len() != b.len() {
        return Err(CorpusError::TrackMismatch(format!(
            "{} tracks vs {} tracks",
            a.len(),
            b.len()
        )));
    }
    let xa: Vec<f64> = a.iter().map(|s| s.means[feature]).collect();
    let xb: Vec<f64> = b.iter().map(|s| s.means[feature]).collect();
    spearman(&xa, &xb)
}

/// Songs per release year, with zero counts for gap years between the first
/// and last release.
pub fn releases_by_year(manifest: &[TrackMeta]) -> BTreeMap<i32, usize> {
    let mut counts = BTreeMap::new();
    for t in manifest {
        *counts.entry(t.release_year).or_insert(0) += 1;
    }
    if let (Some(&lo), Some(&hi)) = (
        counts.keys().next().copied().as_ref(),
        counts.keys().last().copied().as_ref(),
    ) {
        for y in lo..=hi {
            counts.entry(y).or_insert(0);
        }
    }
    counts
}
