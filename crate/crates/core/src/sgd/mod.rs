//! Linear scorers trained by seeded stochastic gradient descent.
//!
//! Four objectives share one model type:
//!
//! * `Logistic`: `log(1 + exp(-(2y - 1) s))` per example;
//! * `Squared`: `(y - s)^2` per example, truncated to `[0, 1]` at prediction time;
//! * `PairwiseLogistic`: `log(1 + exp(-(s(x+) - s(x-))))` per positive/negative pair;
//! * `Crr`: a convex mix of the pairwise and the pointwise logistic losses.
//!
//! All of them add `lambda / 2 * ||w||^2`; the bias is never regularized.

mod step;
mod train;

pub use step::{pairwise_step, pointwise_step, sigmoid};
pub use train::{step_size, train};

use std::fmt;

use crate::data::{FeatureVector, Scaling};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    Logistic,
    Squared,
    PairwiseLogistic,
    Crr,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Logistic => "logistic",
            LossKind::Squared => "squared",
            LossKind::PairwiseLogistic => "pairwise-logistic",
            LossKind::Crr => "crr",
        }
    }

    /// Whether the raw model output maps directly to a probability.
    pub fn is_probabilistic(self) -> bool {
        !matches!(self, LossKind::PairwiseLogistic)
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `score(x) = w.x + bias`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
    kind: LossKind,
}

impl LinearModel {
    pub fn new(weights: Vec<f64>, bias: f64, kind: LossKind) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("model needs at least one weight".into()));
        }
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("model parameters must be finite".into()));
        }
        Ok(Self { weights, bias, kind })
    }

    pub fn zeros(dimension: usize, kind: LossKind) -> Result<Self> {
        Self::new(vec![0.0; dimension], 0.0, kind)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    fn check_dimension(&self, x: &FeatureVector) -> Result<()> {
        if x.dimension() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: x.dimension(),
            });
        }
        Ok(())
    }

    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        self.check_dimension(x)?;
        Ok(x.dot(&self.weights) + self.bias)
    }

    /// Sigmoid of the score for `Logistic` and `Crr`, the score clamped to
    /// `[0, 1]` for `Squared`. Pairwise rankers have no probability scale and
    /// must be calibrated first.
    pub fn probability(&self, x: &FeatureVector) -> Result<f64> {
        let s = self.score(x)?;
        match self.kind {
            LossKind::Logistic | LossKind::Crr => Ok(sigmoid(s)),
            LossKind::Squared => Ok(s.clamp(0.0, 1.0)),
            LossKind::PairwiseLogistic => Err(Error::UnsupportedLoss {
                operation: "probability prediction",
                kind: self.kind.name(),
            }),
        }
    }

    /// Rewrites a model trained on `scaling`-transformed features so that it
    /// scores raw features directly.
    pub fn unscaled(&self, scaling: &Scaling) -> Result<LinearModel> {
        if scaling.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: scaling.dimension(),
            });
        }
        let weights: Vec<f64> = self.weights.iter().zip(scaling.scale()).map(|(w, s)| w / s).collect();
        let shift: f64 = weights.iter().zip(scaling.mean()).map(|(w, m)| w * m).sum();
        LinearModel::new(weights, self.bias - shift, self.kind)
    }

    pub(crate) fn into_parts(self) -> (Vec<f64>, f64) {
        (self.weights, self.bias)
    }
}

/// Hyperparameters for [`train`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// l2 strength; 0 switches the step schedule to `eta0 / sqrt(1 + t)`.
    pub lambda: f64,
    pub steps: usize,
    pub eta0: f64,
    pub seed: u64,
    /// Probability that a CRR step is pairwise rather than pointwise.
    pub crr_alpha: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lambda: 1e-3,
            steps: 100_000,
            eta0: 0.1,
            seed: 0,
            crr_alpha: 0.5,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        if !(self.eta0 > 0.0 && self.eta0.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta0 must be > 0, got {}", self.eta0)));
        }
        if !(0.0..=1.0).contains(&self.crr_alpha) {
            return Err(Error::InvalidArgument(format!(
                "crr_alpha must lie in [0, 1], got {}",
                self.crr_alpha
            )));
        }
        Ok(())
    }
}
