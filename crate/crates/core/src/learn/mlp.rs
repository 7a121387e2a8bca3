//! Single-hidden-layer network: logistic hidden units, softmax output,
//! cross-entropy loss, full-batch gradient descent.

use super::{LearnError, SegmentDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Hidden layer width (matches the 41-input architecture).
pub const MLP_HIDDEN_UNITS: usize = 41;
const LEARNING_RATE: f64 = 0.1;
const INIT_RANGE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    /// Input-to-hidden weights, indexed [input][hidden].
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    /// Hidden-to-output weights, indexed [hidden][output].
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

/// Gradient of the mean cross-entropy loss, same shapes as the model.
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl MlpModel {
    pub fn input_dim(&self) -> usize {
        self.w1.len()
    }

    pub fn hidden_dim(&self) -> usize {
        self.b1.len()
    }

    pub fn output_dim(&self) -> usize {
        self.b2.len()
    }

    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        (0..self.hidden_dim())
            .map(|j| {
                let a = self.b1[j] + x.iter().zip(&self.w1).map(|(xi, row)| xi * row[j]).sum::<f64>();
                sigmoid(a)
            })
            .collect()
    }

    fn logits_from_hidden(&self, h: &[f64]) -> Vec<f64> {
        (0..self.output_dim())
            .map(|k| self.b2[k] + h.iter().zip(&self.w2).map(|(hj, row)| hj * row[k]).sum::<f64>())
            .collect()
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        if x.len() != self.input_dim() {
            return Err(LearnError::DimensionMismatch {
                expect: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(self.logits_from_hidden(&self.hidden(x)))
    }

    /// Softmax class probabilities; numerically stable.
    pub fn probabilities(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        Ok(softmax(&self.logits(x)?))
    }

    /// Mean cross-entropy over the dataset.
    pub fn loss(&self, ds: &SegmentDataset) -> Result<f64, LearnError> {
        let mut total = 0.0;
        for row in &ds.rows {
            let logits = self.logits(&row.features)?;
            total -= log_softmax_at(&logits, row.label);
        }
        Ok(total / ds.rows.len().max(1) as f64)
    }

    /// Analytic gradient of `loss` by backpropagation.
    // Indexed loops mirror the layer algebra; iterator chains read worse here.
    #[allow(clippy::needless_range_loop)]
    pub fn gradients(&self, ds: &SegmentDataset) -> Result<MlpGradients, LearnError> {
        let (input, hidden, output) = (self.input_dim(), self.hidden_dim(), self.output_dim());
        let mut g = MlpGradients {
            w1: vec![vec![0.0; hidden]; input],
            b1: vec![0.0; hidden],
            w2: vec![vec![0.0; output]; hidden],
            b2: vec![0.0; output],
        };
        let batch = ds.rows.len().max(1) as f64;
        for row in &ds.rows {
            if row.features.len() != input {
                return Err(LearnError::DimensionMismatch {
                    expect: input,
                    got: row.features.len(),
                });
            }
            let h = self.hidden(&row.features);
            let probs = softmax(&self.logits_from_hidden(&h));
            // dL/dz_k = (p_k - y_k) / batch
            let dz: Vec<f64> = probs
                .iter()
                .enumerate()
                .map(|(k, p)| (p - if k == row.label { 1.0 } else { 0.0 }) / batch)
                .collect();
            for j in 0..hidden {
                for k in 0..output {
                    g.w2[j][k] += h[j] * dz[k];
                }
            }
            for k in 0..output {
                g.b2[k] += dz[k];
            }
            // Back through the logistic: da_j = (sum_k dz_k w2_jk) h_j (1-h_j)
            let da: Vec<f64> = (0..hidden)
                .map(|j| {
                    let dh: f64 = dz.iter().zip(&self.w2[j]).map(|(d, w)| d * w).sum();
                    dh * h[j] * (1.0 - h[j])
                })
                .collect();
            for i in 0..input {
                for j in 0..hidden {
                    g.w1[i][j] += row.features[i] * da[j];
                }
            }
            for j in 0..hidden {
                g.b1[j] += da[j];
            }
        }
        Ok(g)
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let exps: Vec<f64> = logits.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_softmax_at(logits: &[f64], label: usize) -> f64 {
    let max = logits.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let log_sum = logits.iter().map(|&x| (x - max).exp()).sum::<f64>().ln() + max;
    logits[label] - log_sum
}

/// Full-batch gradient descent from a seeded uniform [-0.05, 0.05] start.
pub fn train_mlp(train: &SegmentDataset, epochs: usize, seed: u64) -> Result<MlpModel, LearnError> {
    if train.rows.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    if train.classes.len() < 2 {
        return Err(LearnError::TooFewClasses {
            need: 2,
            got: train.classes.len(),
        });
    }
    let (input, hidden, output) = (train.num_features, MLP_HIDDEN_UNITS, train.classes.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init = |n: usize| -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-INIT_RANGE..INIT_RANGE)).collect()
    };
    let mut model = MlpModel {
        w1: (0..input).map(|_| init(hidden)).collect(),
        b1: init(hidden),
        w2: (0..hidden).map(|_| init(output)).collect(),
        b2: init(output),
    };
    for _ in 0..epochs {
        let g = model.gradients(train)?;
        for (row, grow) in model.w1.iter_mut().zip(&g.w1) {
            for (w, d) in row.iter_mut().zip(grow) {
                *w -= LEARNING_RATE * d;
            }
        }
        for (b, d) in model.b1.iter_mut().zip(&g.b1) {
            *b -= LEARNING_RATE * d;
        }
        for (row, grow) in model.w2.iter_mut().zip(&g.w2) {
            for (w, d) in row.iter_mut().zip(grow) {
                *w -= LEARNING_RATE * d;
            }
        }
        for (b, d) in model.b2.iter_mut().zip(&g.b2) {
            *b -= LEARNING_RATE * d;
        }
    }
    Ok(model)
}

/// Argmax of the softmax output; ties break to the lowest class index.
pub fn predict_mlp(model: &MlpModel, features: &[f64]) -> Result<usize, LearnError> {
    let logits = model.logits(features)?;
    let mut best = 0;
    for (k, &z) in logits.iter().enumerate() {
        if z > logits[best] {
            best = k;
        }
    }
    Ok(best)
}
