//! Multinomial logistic regression over one-hot feature vectors.

mod ablation;
mod metrics;

pub use ablation::{run_ablation, AblationPlan, AblationResult, AblationRow, AblationTable};
pub use metrics::{f1_score, score, Aggregate, ClassScores, EvalReport, Scores};

use crate::connectives::RelationLabel;
use crate::features::{FeatureError, FeatureVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

const K: usize = RelationLabel::ALL.len();

pub type Example = (FeatureVector, RelationLabel);

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("examples come from more than one feature space")]
    MixedSpaces,
    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Divergence { epoch: usize },
    #[error("model was trained on feature space {expected} but the vector uses {found}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("invalid train config: {0}")]
    InvalidConfig(String),
    #[error("ablation plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2_penalty: f64,
    pub max_epochs: usize,
    /// Stop once the relative loss improvement falls below this.
    pub convergence_tol: f64,
    pub shuffle_seed: u64,
    /// Bootstrap-resample the training set in each repeated run.
    #[serde(default)]
    pub resample: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            l2_penalty: 1e-4,
            max_epochs: 200,
            convergence_tol: 1e-6,
            shuffle_seed: 0,
            resample: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |m: &str| Err(ClassifierError::InvalidConfig(m.into()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(self.l2_penalty >= 0.0 && self.l2_penalty.is_finite()) {
            return bad("l2_penalty must be non-negative");
        }
        if self.convergence_tol.is_nan() || self.convergence_tol < 0.0 {
            return bad("convergence_tol must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub labels: Vec<RelationLabel>,
    /// One row of length `dim` per label.
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub dim: usize,
    pub space_fingerprint: String,
    pub config: TrainConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: RelationLabel,
    pub probabilities: BTreeMap<RelationLabel, f64>,
}

impl LinearModel {
    pub fn zeros(dim: usize, space_fingerprint: &str, config: TrainConfig) -> Self {
        LinearModel {
            labels: RelationLabel::ALL.to_vec(),
            weights: vec![vec![0.0; dim]; K],
            biases: vec![0.0; K],
            dim,
            space_fingerprint: space_fingerprint.to_string(),
            config,
        }
    }

    fn logits(&self, indices: &[usize]) -> [f64; K] {
        let mut z = [0.0; K];
        for (k, zk) in z.iter_mut().enumerate() {
            *zk = self.biases[k] + indices.iter().map(|&i| self.weights[k][i]).sum::<f64>();
        }
        z
    }

    fn check(&self, v: &FeatureVector) -> Result<(), ClassifierError> {
        if v.fingerprint != self.space_fingerprint || v.dim != self.dim {
            return Err(ClassifierError::FingerprintMismatch {
                expected: self.space_fingerprint.clone(),
                found: v.fingerprint.clone(),
            });
        }
        Ok(())
    }

    pub fn predict(&self, v: &FeatureVector) -> Result<Prediction, ClassifierError> {
        self.check(v)?;
        let p = softmax(&self.logits(&v.indices));
        let mut best = 0;
        for k in 1..K {
            if p[k] > p[best] {
                best = k;
            }
        }
        Ok(Prediction {
            label: RelationLabel::ALL[best],
            probabilities: RelationLabel::ALL.iter().copied().zip(p).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64; K]) -> [f64; K] {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p = z.map(|x| (x - max).exp());
    let sum: f64 = p.iter().sum();
    for x in &mut p {
        *x /= sum;
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

/// Mean cross-entropy plus `(l2 / 2) * ||W||^2` (biases unregularized),
/// and its gradient.
pub fn loss_and_gradient(model: &LinearModel, data: &[Example], l2: f64) -> (f64, Gradient) {
    let mut grad = Gradient { weights: vec![vec![0.0; model.dim]; K], biases: vec![0.0; K] };
    let n = data.len().max(1) as f64;
    let mut loss = 0.0;
    for (v, label) in data {
        let z = model.logits(&v.indices);
        let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + z.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
        let y = label.index();
        loss += log_sum - z[y];
        for (k, zk) in z.iter().enumerate() {
            let d = ((zk - log_sum).exp() - if k == y { 1.0 } else { 0.0 }) / n;
            grad.biases[k] += d;
            for &i in &v.indices {
                grad.weights[k][i] += d;
            }
        }
    }
    loss /= n;
    let mut reg = 0.0;
    for (gw, w) in grad.weights.iter_mut().zip(&model.weights) {
        for (g, x) in gw.iter_mut().zip(w) {
            reg += x * x;
            *g += l2 * x;
        }
    }
    (loss + 0.5 * l2 * reg, grad)
}

/// A trained model and the loss before each accepted step, ending with the
/// final loss.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LinearModel,
    pub loss_history: Vec<f64>,
}

fn common_space(data: &[Example]) -> Result<(usize, String), ClassifierError> {
    let (first, _) = data.first().ok_or(ClassifierError::EmptyTrainingSet)?;
    if data.iter().any(|(v, _)| v.fingerprint != first.fingerprint || v.dim != first.dim) {
        return Err(ClassifierError::MixedSpaces);
    }
    Ok((first.dim, first.fingerprint.clone()))
}

pub fn train(data: &[Example], config: &TrainConfig) -> Result<LinearModel, ClassifierError> {
    train_with_history(data, config).map(|o| o.model)
}

/// Full-batch gradient descent from zero weights. Examples are put in a
/// canonical order first, so the result does not depend on input order.
pub fn train_with_history(data: &[Example], config: &TrainConfig) -> Result<TrainOutcome, ClassifierError> {
    config.validate()?;
    let (dim, fingerprint) = common_space(data)?;
    let mut sorted: Vec<Example> = data.to_vec();
    sorted.sort_by(|a, b| (&a.0.indices, a.1).cmp(&(&b.0.indices, b.1)));

    let mut model = LinearModel::zeros(dim, &fingerprint, config.clone());
    let mut history = Vec::new();
    for epoch in 0..config.max_epochs {
        let (loss, grad) = loss_and_gradient(&model, &sorted, config.l2_penalty);
        if !loss.is_finite() {
            return Err(ClassifierError::Divergence { epoch });
        }
        if let Some(&prev) = history.last() {
            if loss > prev {
                // overshoot: keep the previous parameters
                break;
            }
            if (prev - loss) / prev.abs().max(f64::MIN_POSITIVE) < config.convergence_tol {
                history.push(loss);
                break;
            }
        }
        history.push(loss);
        let previous = model.clone();
        for (w, g) in model.weights.iter_mut().zip(&grad.weights) {
            for (x, d) in w.iter_mut().zip(g) {
                *x -= config.learning_rate * d;
            }
        }
        for (b, d) in model.biases.iter_mut().zip(&grad.biases) {
            *b -= config.learning_rate * d;
        }
        if epoch + 1 == config.max_epochs {
            let (final_loss, _) = loss_and_gradient(&model, &sorted, config.l2_penalty);
            if !final_loss.is_finite() {
                return Err(ClassifierError::Divergence { epoch: epoch + 1 });
            }
            if final_loss > loss {
                model = previous;
            } else {
                history.push(final_loss);
            }
        }
    }
    Ok(TrainOutcome { model, loss_history: history })
}

pub fn predict_all_labels(model: &LinearModel, test: &[Example]) -> Result<Vec<RelationLabel>, ClassifierError> {
    test.iter().map(|(v, _)| model.predict(v).map(|p| p.label)).collect()
}

pub fn evaluate(model: &LinearModel, test: &[Example]) -> Result<EvalReport, ClassifierError> {
    Ok(EvalReport::from_runs(vec![evaluate_once(model, test)?]))
}

fn evaluate_once(model: &LinearModel, test: &[Example]) -> Result<Scores, ClassifierError> {
    if test.is_empty() {
        return Err(ClassifierError::EmptyTestSet);
    }
    let predicted = predict_all_labels(model, test)?;
    let gold: Vec<RelationLabel> = test.iter().map(|(_, l)| *l).collect();
    Ok(score(&gold, &predicted))
}

/// Trains and evaluates `n_runs` times with seeds `seed + i`. Without
/// resampling every run sees the same data and the runs coincide.
pub fn run_repeated(
    train_set: &[Example],
    test_set: &[Example],
    config: &TrainConfig,
    n_runs: usize,
) -> Result<EvalReport, ClassifierError> {
    if n_runs == 0 {
        return Err(ClassifierError::InvalidConfig("n_runs must be >= 1".into()));
    }
    if test_set.is_empty() {
        return Err(ClassifierError::EmptyTestSet);
    }
    let runs: Vec<Scores> = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = TrainConfig { shuffle_seed: config.shuffle_seed.wrapping_add(i), ..config.clone() };
            let model = if cfg.resample {
                train(&bootstrap(train_set, cfg.shuffle_seed), &cfg)?
            } else {
                train(train_set, &cfg)?
            };
            evaluate_once(&model, test_set)
        })
        .collect::<Result<_, _>>()?;
    Ok(EvalReport::from_runs(runs))
}

/// Sample of the same size drawn with replacement.
pub fn bootstrap(data: &[Example], seed: u64) -> Vec<Example> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..data.len()).map(|_| data[rng.gen_range(0..data.len())].clone()).collect()
}
