//! Distances between summary vectors, similarity matrices, and the
//! representativeness ranking.

use super::{CorpusError, TrackMeta};
use crate::features::{idx, SongSummary, NUM_FEATURES};

/// The six canonical feature subsets compared in the album matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSubset {
    /// All 41 features.
    All,
    /// Rhythm features 26-39.
    Rhythm,
    /// Spectral-timbral features 17-22.
    Spectral,
    /// MFCCs 5-16.
    Mfcc,
    /// 90% spectral percentile alone.
    P90,
    /// Harmonicity alone.
    Harmonicity,
}

impl FeatureSubset {
    pub const ALL_SUBSETS: [FeatureSubset; 6] = [
        FeatureSubset::All,
        FeatureSubset::Rhythm,
        FeatureSubset::Spectral,
        FeatureSubset::Mfcc,
        FeatureSubset::P90,
        FeatureSubset::Harmonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureSubset::All => "all",
            FeatureSubset::Rhythm => "rhythm",
            FeatureSubset::Spectral => "spectral",
            FeatureSubset::Mfcc => "mfcc",
            FeatureSubset::P90 => "p90",
            FeatureSubset::Harmonicity => "harmonicity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL_SUBSETS.iter().copied().find(|s| s.name() == name)
    }

    pub fn indices(self) -> Vec<usize> {
        match self {
            FeatureSubset::All => (0..NUM_FEATURES).collect(),
            FeatureSubset::Rhythm => (idx::ONSET_COUNT_PERC..=idx::BEAT_METRICITY_FULL).collect(),
            FeatureSubset::Spectral => (idx::CENTROID..=idx::ENTROPY).collect(),
            FeatureSubset::Mfcc => (idx::MFCC_FIRST..=idx::MFCC_LAST).collect(),
            FeatureSubset::P90 => vec![idx::PERCENTILE_90],
            FeatureSubset::Harmonicity => vec![idx::HARMONICITY],
        }
    }
}

/// Vector metric; Euclidean is the pipeline default, the others were tried
/// informally and ride behind the same interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    CityBlock,
    Cosine,
}

/// Distance restricted to the feature indices in `subset`.
pub fn distance_with(
    metric: Metric,
    a: &[f64],
    b: &[f64],
    subset: &[usize],
) -> Result<f64, CorpusError> {
    if a.len() != b.len() {
        return Err(CorpusError::LengthMismatch(a.len(), b.len()));
    }
    for &i in subset {
        if i >= a.len() {
            return Err(CorpusError::BadFeatureIndex(i));
        }
    }
    Ok(match metric {
        Metric::Euclidean => subset
            .iter()
            .map(|&i| (a[i] - b[i]) * (a[i] - b[i]))
            .sum::<f64>()
            .sqrt(),
        Metric::CityBlock => subset.iter().map(|&i| (a[i] - b[i]).abs()).sum(),
        Metric::Cosine => {
            let dot: f64 = subset.iter().map(|&i| a[i] * b[i]).sum();
            let na: f64 = subset.iter().map(|&i| a[i] * a[i]).sum::<f64>().sqrt();
            let nb: f64 = subset.iter().map(|&i| b[i] * b[i]).sum::<f64>().sqrt();
            if na == 0.0 || nb == 0.0 {
                // A zero vector has no direction; call it maximally distant
                // unless both are zero.
                if na == nb {
                    0.0
                } else {
                    1.0
                }
            } else {
                1.0 - dot / (na * nb)
            }
        }
    })
}

/// Euclidean distance over a feature subset (the paper's default).
pub fn distance(a: &[f64], b: &[f64], subset: &[usize]) -> Result<f64, CorpusError> {
    distance_with(Metric::Euclidean, a, b, subset)
}

/// Symmetric pairwise-distance matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub labels: Vec<String>,
    pub d: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn pairwise(
    labels: Vec<String>,
    vectors: &[Vec<f64>],
    subset: &[usize],
    metric: Metric,
) -> Result<SimilarityMatrix, CorpusError> {
    let n = vectors.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = distance_with(metric, &vectors[i], &vectors[j], subset)?;
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    Ok(SimilarityMatrix { labels, d })
}

/// Song-level matrix over normalized summaries.
pub fn similarity_matrix(
    summaries: &[SongSummary],
    subset: &FeatureSubset,
    metric: Metric,
) -> Result<SimilarityMatrix, CorpusError> {
    if summaries.is_empty() {
        return Err(CorpusError::EmptySummaries);
    }
    let labels = summaries.iter().map(|s| s.song_id.clone()).collect();
    let vectors: Vec<Vec<f64>> = summaries.iter().map(|s| s.means.to_vec()).collect();
    pairwise(labels, &vectors, &subset.indices(), metric)
}

/// Album-level matrix: mean of each album's normalized song summaries,
/// albums ordered chronologically (earliest release year, then code).
pub fn album_matrix(
    summaries: &[SongSummary],
    manifest: &[TrackMeta],
    subset: &FeatureSubset,
    metric: Metric,
) -> Result<SimilarityMatrix, CorpusError> {
    if summaries.is_empty() {
        return Err(CorpusError::EmptySummaries);
    }
    let year_of = |album: &str| {
        manifest
            .iter()
            .filter(|t| t.album == album)
            .map(|t| t.release_year)
            .min()
            .unwrap_or(i32::MAX)
    };
    let mut albums: Vec<String> = Vec::new();
    for t in manifest {
        if !albums.contains(&t.album) {
            albums.push(t.album.clone());
        }
    }
    albums.sort_by(|a, b| year_of(a).cmp(&year_of(b)).then(a.cmp(b)));

    let mut vectors = Vec::with_capacity(albums.len());
    for album in &albums {
        let ids: Vec<&str> = manifest
            .iter()
            .filter(|t| &t.album == album)
            .map(|t| t.song_id.as_str())
            .collect();
        let members: Vec<&SongSummary> = summaries
            .iter()
            .filter(|s| ids.contains(&s.song_id.as_str()))
            .collect();
        let mut mean = vec![0.0; NUM_FEATURES];
        for m in &members {
            for (slot, v) in mean.iter_mut().zip(&m.means) {
                *slot += v;
            }
        }
        if !members.is_empty() {
            for slot in &mut mean {
                *slot /= members.len() as f64;
            }
        }
        vectors.push(mean);
    }
    pairwise(albums, &vectors, &subset.indices(), metric)
}

/// Column sums in ascending order: low total distance means the entity is
/// most like the rest of the corpus.
pub fn representativeness(matrix: &SimilarityMatrix) -> Vec<(String, f64)> {
    let mut scored: Vec<(String, f64)> = matrix
        .labels
        .iter()
        .enumerate()
        .map(|(i, label)| (label.clone(), matrix.d.iter().map(|row| row[i]).sum()))
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    scored
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_examples() {
        let subset: Vec<usize> = (0..4).collect();
        let a = vec![0.1, 0.2, 0.3, 0.4];
        assert_eq!(distance(&a, &a, &subset).unwrap(), 0.0);
        let mut b = a.clone();
        b[2] += 1.0;
        assert!((distance(&a, &b, &subset).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            distance(&a, &b, &[7]),
            Err(CorpusError::BadFeatureIndex(7))
        ));
    }

    #[test]
    fn euclidean_matches_naive_loop() {
        let a: Vec<f64> = (0..41).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..41).map(|i| (i as f64 * 0.71).cos()).collect();
        let subset: Vec<usize> = (0..41).collect();
        let mut acc = 0.0;
        for i in 0..41 {
            acc += (a[i] - b[i]) * (a[i] - b[i]);
        }
        let oracle = acc.sqrt();
        assert!((distance(&a, &b, &subset).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn city_block_and_cosine_behave() {
        let subset = vec![0, 1];
        let a = vec![1.0, 0.0];
        let b = vec![0.0, 1.0];
        assert!((distance_with(Metric::CityBlock, &a, &b, &subset).unwrap() - 2.0).abs() < 1e-12);
        assert!((distance_with(Metric::Cosine, &a, &b, &subset).unwrap() - 1.0).abs() < 1e-12);
        assert!(distance_with(Metric::Cosine, &a, &a, &subset).unwrap() < 1e-12);
    }

    #[test]
    fn subset_names_round_trip() {
        for s in FeatureSubset::ALL_SUBSETS {
            assert_eq!(FeatureSubset::from_name(s.name()), Some(s));
        }
        assert_eq!(FeatureSubset::from_name("bogus"), None);
        assert_eq!(FeatureSubset::Rhythm.indices(), (26..=39).collect::<Vec<_>>());
        assert_eq!(FeatureSubset::P90.indices(), vec![19]);
        assert_eq!(FeatureSubset::All.indices().len(), 41);
    }

    fn summary(id: &str, fill: f64) -> SongSummary {
        SongSummary {
            song_id: id.into(),
            means: [fill; NUM_FEATURES],
        }
    }

    #[test]
    fn matrix_is_symmetric_with_zero_diagonal() {
        let summaries = vec![summary("a", 0.0), summary("b", 0.5), summary("c", 1.0)];
        let m = similarity_matrix(&summaries, &FeatureSubset::All, Metric::Euclidean).unwrap();
        assert_eq!(m.len(), 3);
        for i in 0..3 {
            assert_eq!(m.d[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m.d[i][j], m.d[j][i]);
            }
        }
        // Identical entities pin a zero off-diagonal.
        let twins = vec![summary("a", 0.3), summary("b", 0.3)];
        let m = similarity_matrix(&twins, &FeatureSubset::All, Metric::Euclidean).unwrap();
        assert_eq!(m.d[0][1], 0.0);
    }

    #[test]
    fn single_entity_matrix() {
        let m = similarity_matrix(&[summary("only", 0.7)], &FeatureSubset::All, Metric::Euclidean)
            .unwrap();
        assert_eq!(m.d, vec![vec![0.0]]);
    }

    #[test]
    fn representativeness_ranks_by_column_sum() {
        let m = SimilarityMatrix {
            labels: vec!["a".into(), "b".into(), "c".into()],
            d: vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 10.0],
                vec![1.0, 10.0, 0.0],
            ],
        };
        let ranked = representativeness(&m);
        assert_eq!(ranked[0], ("a".to_string(), 2.0));
        assert_eq!(ranked[1].1, 11.0);
        // Scaling the matrix leaves the ordering alone.
        let scaled = SimilarityMatrix {
            labels: m.labels.clone(),
            d: m.d.iter().map(|r| r.iter().map(|x| x * 7.5).collect()).collect(),
        };
        let ranked_scaled = representativeness(&scaled);
        let order: Vec<&String> = ranked.iter().map(|(l, _)| l).collect();
        let order_scaled: Vec<&String> = ranked_scaled.iter().map(|(l, _)| l).collect();
        assert_eq!(order, order_scaled);
    }

    #[test]
    fn ties_keep_label_order() {
        let m = SimilarityMatrix {
            labels: vec!["x".into(), "y".into()],
            d: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        };
        let ranked = representativeness(&m);
        assert_eq!(ranked[0].0, "x");
        assert_eq!(ranked[1].0, "y");
        assert_eq!(ranked[0].1, ranked[1].1);
    }

    #[test]
    fn album_matrix_orders_chronologically() {
        let manifest = vec![
            TrackMeta {
                song_id: "s1".into(),
                path: "a.wav".into(),
                title: "t1".into(),
                album: "NEW".into(),
                release_year: 2001,
            },
            TrackMeta {
                song_id: "s2".into(),
                path: "b.wav".into(),
                title: "t2".into(),
                album: "OLD".into(),
                release_year: 1995,
            },
            TrackMeta {
                song_id: "s3".into(),
                path: "c.wav".into(),
                title: "t3".into(),
                album: "OLD".into(),
                release_year: 1995,
            },
        ];
        let summaries = vec![summary("s1", 1.0), summary("s2", 0.0), summary("s3", 0.5)];
        let m = album_matrix(&summaries, &manifest, &FeatureSubset::All, Metric::Euclidean).unwrap();
        assert_eq!(m.labels, vec!["OLD".to_string(), "NEW".to_string()]);
        // OLD mean is 0.25 everywhere; NEW is 1.0; distance sqrt(41)*0.75.
        let expect = (41f64).sqrt() * 0.75;
        assert!((m.d[0][1] - expect).abs() < 1e-12);
    }
}
