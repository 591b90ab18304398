use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::step::{pairwise_pull, pointwise_slope, shrink_factor};
use super::{LinearModel, LossKind, TrainConfig};
use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};

/// Step size at step `t` (0-based): `eta0 / (1 + eta0 * lambda * t)`, or
/// `eta0 / sqrt(1 + t)` when `lambda == 0`.
pub fn step_size(eta0: f64, lambda: f64, t: usize) -> f64 {
    let t = t as f64;
    if lambda > 0.0 {
        eta0 / (1.0 + eta0 * lambda * t)
    } else {
        eta0 / (1.0 + t).sqrt()
    }
}

/// Weights stored as `scale * v` so the l2 shrink is O(1) per step on
/// sparse data.
struct ScaledWeights {
    v: Vec<f64>,
    scale: f64,
}

impl ScaledWeights {
    fn zeros(dimension: usize) -> Self {
        Self {
            v: vec![0.0; dimension],
            scale: 1.0,
        }
    }

    fn dot(&self, x: &FeatureVector) -> f64 {
        self.scale * x.dot(&self.v)
    }

    fn shrink(&mut self, factor: f64) {
        if factor == 0.0 {
            self.v.iter_mut().for_each(|v| *v = 0.0);
            self.scale = 1.0;
            return;
        }
        self.scale *= factor;
        if self.scale < 1e-9 {
            let s = self.scale;
            self.v.iter_mut().for_each(|v| *v *= s);
            self.scale = 1.0;
        }
    }

    fn add(&mut self, coef: f64, x: &FeatureVector) {
        let c = coef / self.scale;
        for &(i, v) in x.entries() {
            self.v[i] += c * v;
        }
    }

    fn into_vec(self) -> Vec<f64> {
        let s = self.scale;
        self.v.into_iter().map(|v| v * s).collect()
    }
}

struct Trainer<'a> {
    data: &'a Dataset,
    w: ScaledWeights,
    bias: f64,
    kind: LossKind,
}

impl Trainer<'_> {
    fn pointwise(&mut self, i: usize, eta: f64, lambda: f64) {
        let x = &self.data.rows()[i];
        let y = self.data.labels()[i];
        let score = self.w.dot(x) + self.bias;
        let g = pointwise_slope(self.kind, score, y);
        self.w.shrink(shrink_factor(eta, lambda));
        self.w.add(-eta * g, x);
        self.bias -= eta * g;
    }

    fn pairwise(&mut self, pos: usize, neg: usize, eta: f64, lambda: f64) {
        let xp = &self.data.rows()[pos];
        let xn = &self.data.rows()[neg];
        let margin = self.w.dot(xp) - self.w.dot(xn);
        let c = eta * pairwise_pull(margin);
        self.w.shrink(shrink_factor(eta, lambda));
        self.w.add(c, xp);
        self.w.add(-c, xn);
    }
}

/// Trains a linear model from zero weights with `config.steps` SGD steps.
///
/// Pointwise losses sample one example uniformly per step; the pairwise loss
/// samples one positive and one negative uniformly. CRR takes a pairwise step
/// with probability `crr_alpha` and a pointwise logistic step otherwise. The
/// result depends only on the inputs and `config.seed`.
pub fn train(data: &Dataset, kind: LossKind, config: &TrainConfig) -> Result<LinearModel> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let positives: Vec<usize> = (0..data.len()).filter(|&i| data.labels()[i]).collect();
    let negatives: Vec<usize> = (0..data.len()).filter(|&i| !data.labels()[i]).collect();
    if matches!(kind, LossKind::PairwiseLogistic | LossKind::Crr) && (positives.is_empty() || negatives.is_empty()) {
        return Err(Error::MissingClass {
            n_pos: positives.len(),
            n_neg: negatives.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trainer = Trainer {
        data,
        w: ScaledWeights::zeros(data.dimension()),
        bias: 0.0,
        kind,
    };
    let n = data.len();
    let lambda = config.lambda;

    for t in 0..config.steps {
        let eta = step_size(config.eta0, lambda, t);
        let pair_step = match kind {
            LossKind::Logistic | LossKind::Squared => false,
            LossKind::PairwiseLogistic => true,
            LossKind::Crr => rng.random::<f64>() < config.crr_alpha,
        };
        if pair_step {
            let pos = positives[rng.random_range(0..positives.len())];
            let neg = negatives[rng.random_range(0..negatives.len())];
            trainer.pairwise(pos, neg, eta, lambda);
        } else {
            let i = rng.random_range(0..n);
            trainer.pointwise(i, eta, lambda);
        }
    }

    let bias = trainer.bias;
    LinearModel::new(trainer.w.into_vec(), bias, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgd::pointwise_step;

    fn toy() -> Dataset {
        let xs = [
            [1.0, 0.5],
            [-0.3, 2.0],
            [0.8, -1.1],
            [-1.5, -0.2],
            [0.1, 0.1],
            [2.0, 1.0],
        ];
        let ys = [true, false, true, false, false, true];
        let rows = xs.iter().map(|x| FeatureVector::from_dense(x).unwrap()).collect();
        Dataset::new(2, rows, ys.to_vec(), None).unwrap()
    }

    #[test]
    fn schedule() {
        assert_eq!(step_size(0.5, 0.0, 0), 0.5);
        assert_eq!(step_size(0.5, 0.0, 3), 0.25);
        assert_eq!(step_size(1.0, 0.1, 10), 0.5);
    }

    #[test]
    fn one_step_matches_public_step() {
        let d = toy();
        let cfg = TrainConfig {
            steps: 1,
            seed: 42,
            lambda: 0.3,
            eta0: 0.5,
            ..Default::default()
        };
        let a = train(&d, LossKind::Logistic, &cfg).unwrap();
        let b = train(&d, LossKind::Logistic, &cfg).unwrap();
        assert_eq!(a, b);
        // whichever example was drawn, the result is one public step from zero
        let zero = LinearModel::zeros(2, LossKind::Logistic).unwrap();
        let matches_some = d.iter().any(|(x, y)| {
            let s = pointwise_step(&zero, x, y, 0.5, 0.3).unwrap();
            s.weights().iter().zip(a.weights()).all(|(p, q)| (p - q).abs() < 1e-15)
                && (s.bias() - a.bias()).abs() < 1e-15
        });
        assert!(matches_some);
    }

    #[test]
    fn seeds_change_the_path() {
        let d = toy();
        let cfg = TrainConfig {
            steps: 50,
            ..Default::default()
        };
        let a = train(&d, LossKind::PairwiseLogistic, &cfg).unwrap();
        let b = train(&d, LossKind::PairwiseLogistic, &TrainConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn pairwise_needs_both_classes() {
        let d = toy().with_labels(vec![true; 6]).unwrap();
        let cfg = TrainConfig::default();
        assert!(matches!(
            train(&d, LossKind::PairwiseLogistic, &cfg),
            Err(Error::MissingClass { n_pos: 6, n_neg: 0 })
        ));
        assert!(matches!(
            train(&d, LossKind::Crr, &cfg),
            Err(Error::MissingClass { .. })
        ));
        assert!(train(&d, LossKind::Logistic, &cfg).is_ok());
    }

    #[test]
    fn all_positive_labels_push_bias_up() {
        let d = toy().with_labels(vec![true; 6]).unwrap();
        let mut last = 0.0;
        for steps in 1..40 {
            let cfg = TrainConfig {
                steps,
                lambda: 0.0,
                eta0: 0.5,
                seed: 9,
                ..Default::default()
            };
            let m = train(&d, LossKind::Logistic, &cfg).unwrap();
            assert!(m.bias() > last, "bias did not increase at step {steps}");
            last = m.bias();
        }
    }

    #[test]
    fn pairwise_bias_stays_zero() {
        let m = train(
            &toy(),
            LossKind::PairwiseLogistic,
            &TrainConfig {
                steps: 200,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(m.bias(), 0.0);
    }

    #[test]
    fn rejects_empty_data_and_bad_config() {
        let empty = Dataset::new(2, vec![], vec![], None).unwrap();
        assert!(train(&empty, LossKind::Logistic, &TrainConfig::default()).is_err());
        let cfg = TrainConfig {
            steps: 0,
            ..Default::default()
        };
        assert!(train(&toy(), LossKind::Logistic, &cfg).is_err());
    }
}
