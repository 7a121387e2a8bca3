//! Greedy forward feature selection on a fixed song-preserving split.

use super::{
    accuracy, predict_mlp, predict_nb, song_preserving_split, train_mlp, train_nb, LearnError,
    SegmentDataset,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Nb,
    Mlp,
}

#[derive(Debug, Clone)]
pub struct GreedySelection {
    /// Features in the order they were added.
    pub order: Vec<usize>,
    /// Test accuracy after each addition.
    pub accuracies: Vec<f64>,
    /// The prefix of `order` that scored best overall.
    pub best_subset: Vec<usize>,
    pub best_accuracy: f64,
}

fn evaluate(
    kind: ModelKind,
    train: &SegmentDataset,
    test: &SegmentDataset,
    subset: &[usize],
    epochs: usize,
    seed: u64,
) -> Result<f64, LearnError> {
    let train_sub = train.select_features(subset)?;
    let test_sub = test.select_features(subset)?;
    let predictions: Vec<usize> = match kind {
        ModelKind::Nb => {
            let model = train_nb(&train_sub)?;
            test_sub
                .rows
                .iter()
                .map(|r| predict_nb(&model, &r.features))
                .collect::<Result<_, _>>()?
        }
        ModelKind::Mlp => {
            let model = train_mlp(&train_sub, epochs, seed)?;
            test_sub
                .rows
                .iter()
                .map(|r| predict_mlp(&model, &r.features))
                .collect::<Result<_, _>>()?
        }
    };
    let labels: Vec<usize> = test_sub.rows.iter().map(|r| r.label).collect();
    accuracy(&predictions, &labels)
}

/// At each step, add the unused feature whose addition scores highest on a
/// split fixed once up front; the best-scoring stage overall wins. Ties
/// prefer the lowest feature index.
pub fn greedy_select(
    ds: &SegmentDataset,
    kind: ModelKind,
    max_features: usize,
    seed: u64,
) -> Result<GreedySelection, LearnError> {
    let (train, test) = song_preserving_split(ds, 0.5, seed)?;
    // MLP evaluations inside selection stay cheap; accuracy ordering between
    // candidate subsets stabilizes long before full convergence.
    let epochs = 200;
    let mut order: Vec<usize> = Vec::new();
    let mut accuracies: Vec<f64> = Vec::new();
    let mut best_subset: Vec<usize> = Vec::new();
    let mut best_accuracy = f64::NEG_INFINITY;
    let limit = max_features.min(ds.num_features);
    while order.len() < limit {
        let mut step_best: Option<(usize, f64)> = None;
        for f in 0..ds.num_features {
            if order.contains(&f) {
                continue;
            }
            let mut candidate = order.clone();
            candidate.push(f);
            let acc = evaluate(kind, &train, &test, &candidate, epochs, seed)?;
            if step_best.is_none_or(|(_, best)| acc > best) {
                step_best = Some((f, acc));
            }
        }
        let (f, acc) = step_best.expect("limit <= num_features leaves a candidate");
        order.push(f);
        accuracies.push(acc);
        if acc > best_accuracy {
            best_accuracy = acc;
            best_subset = order.clone();
        }
    }
    Ok(GreedySelection {
        order,
        accuracies,
        best_subset,
        best_accuracy,
    })
}
