//! Shallow classifiers over windowed feature segments: song-preserving
//! splits, a single-hidden-layer net, Gaussian naive Bayes, and greedy
//! forward feature selection.

mod greedy;
mod io;
mod mlp;
mod nb;

pub use greedy::{greedy_select, GreedySelection, ModelKind};
pub use io::{load_mlp, load_nb, save_mlp, save_nb, write_confusion_csv, ModelMeta};
pub use mlp::{predict_mlp, train_mlp, MlpGradients, MlpModel, MLP_HIDDEN_UNITS};
pub use nb::{predict_nb, train_nb, NbModel};

use crate::features::{windowed_means, FeatureTrail, NUM_FEATURES};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("need at least {need} classes, got {got}")]
    TooFewClasses { need: usize, got: usize },
    #[error("need at least 2 songs to split, got {0}")]
    TooFewSongs(usize),
    #[error("class {class:?} has {rows} rows; naive Bayes needs at least 2 (try grouping years into eras)")]
    ClassTooSmall { class: String, rows: usize },
    #[error("row {row} has label {label} but only {classes} classes are defined")]
    BadLabel {
        row: usize,
        label: usize,
        classes: usize,
    },
    #[error("row {row} has {got} features, expected {expect}")]
    BadWidth { row: usize, got: usize, expect: usize },
    #[error("non-finite feature value in row {0}")]
    NonFinite(usize),
    #[error("feature width mismatch: model expects {expect}, got {got}")]
    DimensionMismatch { expect: usize, got: usize },
    #[error("prediction/label lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("year {0} has no release and no era")]
    GapYear(i32),
    #[error("feature index {0} out of range")]
    BadFeatureIndex(usize),
    #[error(transparent)]
    Feature(#[from] crate::features::FeatureError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad model file {path}: {detail}")]
    BadModelFile { path: String, detail: String },
}

/// One training segment: feature vector, class id, and the owning song.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRow {
    pub features: Vec<f64>,
    pub label: usize,
    pub song_id: String,
}

/// Labeled segments plus the class-name table.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentDataset {
    pub rows: Vec<SegmentRow>,
    pub classes: Vec<String>,
    pub num_features: usize,
}

impl SegmentDataset {
    pub fn new(rows: Vec<SegmentRow>, classes: Vec<String>) -> Result<Self, LearnError> {
        let num_features = rows.first().map_or(NUM_FEATURES, |r| r.features.len());
        for (i, row) in rows.iter().enumerate() {
            if row.label >= classes.len() {
                return Err(LearnError::BadLabel {
                    row: i,
                    label: row.label,
                    classes: classes.len(),
                });
            }
            if row.features.len() != num_features {
                return Err(LearnError::BadWidth {
                    row: i,
                    got: row.features.len(),
                    expect: num_features,
                });
            }
            if row.features.iter().any(|v| !v.is_finite()) {
                return Err(LearnError::NonFinite(i));
            }
        }
        Ok(Self {
            rows,
            classes,
            num_features,
        })
    }

    /// 2-second windowed means at 1-second hops per song, labeled by class
    /// name; class ids follow first appearance order.
    pub fn from_trails(items: &[(&FeatureTrail, &str)]) -> Result<Self, LearnError> {
        let mut classes: Vec<String> = Vec::new();
        let mut rows = Vec::new();
        for (trail, class_name) in items {
            let label = match classes.iter().position(|c| c == class_name) {
                Some(i) => i,
                None => {
                    classes.push(class_name.to_string());
                    classes.len() - 1
                }
            };
            for frame in windowed_means(trail, 2.0, 1.0)? {
                rows.push(SegmentRow {
                    features: frame.values.to_vec(),
                    label,
                    song_id: trail.song_id().to_string(),
                });
            }
        }
        Self::new(rows, classes)
    }

    /// Restrict every row to the given feature indices.
    pub fn select_features(&self, indices: &[usize]) -> Result<Self, LearnError> {
        for &i in indices {
            if i >= self.num_features {
                return Err(LearnError::BadFeatureIndex(i));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| SegmentRow {
                features: indices.iter().map(|&i| r.features[i]).collect(),
                label: r.label,
                song_id: r.song_id.clone(),
            })
            .collect();
        Ok(Self {
            rows,
            classes: self.classes.clone(),
            num_features: indices.len(),
        })
    }

    pub fn song_ids(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in &self.rows {
            if !out.contains(&row.song_id) {
                out.push(row.song_id.clone());
            }
        }
        out
    }
}

/// Partition songs (not rows) so roughly `fraction` of songs land in the
/// training half; no song contributes rows to both sides. Deterministic for
/// a fixed seed.
pub fn song_preserving_split(
    ds: &SegmentDataset,
    fraction: f64,
    seed: u64,
) -> Result<(SegmentDataset, SegmentDataset), LearnError> {
    let mut songs = ds.song_ids();
    if songs.len() < 2 {
        return Err(LearnError::TooFewSongs(songs.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    songs.shuffle(&mut rng);
    let n_train = ((songs.len() as f64 * fraction).round() as usize).clamp(1, songs.len() - 1);
    let train_ids = &songs[..n_train];
    let (mut train_rows, mut test_rows) = (Vec::new(), Vec::new());
    for row in &ds.rows {
        if train_ids.contains(&row.song_id) {
            train_rows.push(row.clone());
        } else {
            test_rows.push(row.clone());
        }
    }
    Ok((
        SegmentDataset {
            rows: train_rows,
            classes: ds.classes.clone(),
            num_features: ds.num_features,
        },
        SegmentDataset {
            rows: test_rows,
            classes: ds.classes.clone(),
            num_features: ds.num_features,
        },
    ))
}

/// Release-era class: 0 up to and including 1997, 1 for 2000-2001, 2 from
/// 2003 on. The corpus has no releases in 1998, 1999, or 2002, so those
/// years have no era.
pub fn era_labels(year: i32) -> Result<u8, LearnError> {
    match year {
        y if y <= 1997 => Ok(0),
        2000 | 2001 => Ok(1),
        y if y >= 2003 => Ok(2),
        y => Err(LearnError::GapYear(y)),
    }
}

/// Fraction of predictions matching labels.
pub fn accuracy(predictions: &[usize], labels: &[usize]) -> Result<f64, LearnError> {
    if predictions.len() != labels.len() {
        return Err(LearnError::LengthMismatch(predictions.len(), labels.len()));
    }
    if predictions.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    let correct = predictions
        .iter()
        .zip(labels)
        .filter(|(p, l)| p == l)
        .count();
    Ok(correct as f64 / predictions.len() as f64)
}

/// The reporting convention for accuracies and chance baselines.
pub fn percent3(fraction: f64) -> String {
    format!("{:.3}%", fraction * 100.0)
}

/// Counts[true][predicted].
pub fn confusion_matrix(predictions: &[usize], labels: &[usize], classes: usize) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0usize; classes]; classes];
    for (&p, &l) in predictions.iter().zip(labels) {
        m[l][p] += 1;
    }
    m
}

/// Per-feature max-min scaling fitted on the training fold only and applied
/// unchanged to test data.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MinMaxScaler {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(ds: &SegmentDataset) -> Result<Self, LearnError> {
        if ds.rows.is_empty() {
            return Err(LearnError::EmptyDataset);
        }
        let mut mins = vec![f64::INFINITY; ds.num_features];
        let mut maxs = vec![f64::NEG_INFINITY; ds.num_features];
        for row in &ds.rows {
            for (i, &v) in row.features.iter().enumerate() {
                mins[i] = mins[i].min(v);
                maxs[i] = maxs[i].max(v);
            }
        }
        Ok(Self { mins, maxs })
    }

    pub fn transform_vec(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let range = self.maxs[i] - self.mins[i];
                if range > 0.0 {
                    (v - self.mins[i]) / range
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn transform(&self, ds: &SegmentDataset) -> SegmentDataset {
        SegmentDataset {
            rows: ds
                .rows
                .iter()
                .map(|r| SegmentRow {
                    features: self.transform_vec(&r.features),
                    label: r.label,
                    song_id: r.song_id.clone(),
                })
                .collect(),
            classes: ds.classes.clone(),
            num_features: ds.num_features,
        }
    }
}
