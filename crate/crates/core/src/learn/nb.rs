//! Gaussian naive Bayes with per-class feature means and floored variances.

use super::{LearnError, SegmentDataset};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Floor keeping constant features from collapsing the likelihood.
const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    /// Class priors, summing to 1.
    pub priors: Vec<f64>,
    /// Per-class, per-feature means.
    pub means: Vec<Vec<f64>>,
    /// Per-class, per-feature variances (population, floored).
    pub variances: Vec<Vec<f64>>,
}

impl NbModel {
    pub fn num_classes(&self) -> usize {
        self.priors.len()
    }

    pub fn num_features(&self) -> usize {
        self.means.first().map_or(0, |m| m.len())
    }

    /// Log prior plus summed Gaussian log likelihoods per class.
    pub fn log_posteriors(&self, features: &[f64]) -> Result<Vec<f64>, LearnError> {
        if features.len() != self.num_features() {
            return Err(LearnError::DimensionMismatch {
                expect: self.num_features(),
                got: features.len(),
            });
        }
        Ok((0..self.num_classes())
            .map(|c| {
                let mut lp = self.priors[c].ln();
                for ((&x, &mu), &var) in features
                    .iter()
                    .zip(&self.means[c])
                    .zip(&self.variances[c])
                {
                    lp += -0.5 * (2.0 * PI * var).ln() - (x - mu) * (x - mu) / (2.0 * var);
                }
                lp
            })
            .collect())
    }
}

/// Fit priors, means, and floored population variances; every class needs at
/// least two rows.
pub fn train_nb(train: &SegmentDataset) -> Result<NbModel, LearnError> {
    if train.rows.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    let k = train.classes.len();
    let d = train.num_features;
    let mut counts = vec![0usize; k];
    for row in &train.rows {
        counts[row.label] += 1;
    }
    for (c, &n) in counts.iter().enumerate() {
        if n < 2 {
            return Err(LearnError::ClassTooSmall {
                class: train.classes[c].clone(),
                rows: n,
            });
        }
    }
    let mut means = vec![vec![0.0; d]; k];
    for row in &train.rows {
        for (m, &x) in means[row.label].iter_mut().zip(&row.features) {
            *m += x;
        }
    }
    for (c, row) in means.iter_mut().enumerate() {
        for m in row {
            *m /= counts[c] as f64;
        }
    }
    let mut variances = vec![vec![0.0; d]; k];
    for row in &train.rows {
        for ((v, &x), &mu) in variances[row.label]
            .iter_mut()
            .zip(&row.features)
            .zip(&means[row.label])
        {
            *v += (x - mu) * (x - mu);
        }
    }
    for (c, row) in variances.iter_mut().enumerate() {
        for v in row {
            *v = (*v / counts[c] as f64).max(VARIANCE_FLOOR);
        }
    }
    let total = train.rows.len() as f64;
    Ok(NbModel {
        priors: counts.iter().map(|&n| n as f64 / total).collect(),
        means,
        variances,
    })
}

/// Argmax posterior; ties break to the lowest class index.
pub fn predict_nb(model: &NbModel, features: &[f64]) -> Result<usize, LearnError> {
    let lp = model.log_posteriors(features)?;
    let mut best = 0;
    for (k, &v) in lp.iter().enumerate() {
        if v > lp[best] {
            best = k;
        }
    }
    Ok(best)
}
