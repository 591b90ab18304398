//! Capped-link synthetic data and the method sweep over the cap `a`.
//!
//! Features are standard normal; the true probability is `a` on the
//! negative side of the hyperplane `w.x = 0` and `1 - a` on the other side.
//! Logistic regression is misspecified for every `0 < a < 1/2`, while any
//! ranker that recovers the direction of `w` is correctly specified up to
//! the monotone link that isotonic regression learns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};
use crate::evaluation::{mean_and_deviation, mse_to_truth, Predictor};
use crate::methods::Method;
use crate::sgd::TrainConfig;

/// `a` values of the standard sweep: 2^-9, 2^-7, 2^-5, 2^-3, 2^-1.
pub const DEFAULT_A_VALUES: [f64; 5] = [1.0 / 512.0, 1.0 / 128.0, 1.0 / 32.0, 1.0 / 8.0, 1.0 / 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct CappedLinkConfig {
    pub a: f64,
    pub w_true: Vec<f64>,
    pub n: usize,
    pub seed: u64,
}

impl CappedLinkConfig {
    /// Two-dimensional data with `w_true = (1, 0)`.
    pub fn new(a: f64, n: usize, seed: u64) -> Self {
        Self {
            a,
            w_true: vec![1.0, 0.0],
            n,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.a) {
            return Err(Error::InvalidArgument(format!(
                "a must lie in [0, 0.5], got {}",
                self.a
            )));
        }
        if self.w_true.is_empty() || self.w_true.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidArgument("w_true must be non-zero".into()));
        }
        if self.w_true.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("w_true must be finite".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        Ok(())
    }
}

/// `a` below the hyperplane, `1 - a` on or above it.
pub fn capped_link(a: f64, margin: f64) -> f64 {
    if margin < 0.0 {
        a
    } else {
        1.0 - a
    }
}

fn draw(config: &CappedLinkConfig, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let dim = config.w_true.len();
    let mut rows = Vec::with_capacity(config.n);
    let mut labels = Vec::with_capacity(config.n);
    let mut eta = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let margin: f64 = x.iter().zip(&config.w_true).map(|(a, b)| a * b).sum();
        let p = capped_link(config.a, margin);
        labels.push(rng.random::<f64>() < p);
        eta.push(p);
        rows.push(FeatureVector::from_dense(&x)?);
    }
    Dataset::new(dim, rows, labels, Some(eta))
}

/// Draws `n` labeled examples with their true probabilities.
pub fn generate(config: &CappedLinkConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    draw(config, &mut rng)
}

/// Positive-unlabeled sample: `data.labels()` holds the observed "labeled"
/// flag, `positive` the hidden class.
#[derive(Debug, Clone)]
pub struct PuSample {
    pub data: Dataset,
    pub positive: Vec<bool>,
}

/// Capped-link data in which each positive is labeled independently with
/// probability `label_rate` (selected completely at random); negatives are
/// never labeled.
pub fn generate_pu(config: &CappedLinkConfig, label_rate: f64) -> Result<PuSample> {
    config.validate()?;
    if !(label_rate > 0.0 && label_rate <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "label rate must lie in (0, 1], got {label_rate}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let full = draw(config, &mut rng)?;
    let labeled: Vec<bool> = full
        .labels()
        .iter()
        .map(|&y| y && rng.random::<f64>() < label_rate)
        .collect();
    Ok(PuSample {
        positive: full.labels().to_vec(),
        data: full.with_labels(labeled)?,
    })
}

/// Child seed for one `(a, trial)` cell; independent of execution order.
pub fn child_seed(seed: u64, a: f64, trial: usize) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(splitmix(splitmix(seed) ^ a.to_bits()) ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub a_values: Vec<f64>,
    pub n: usize,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub w_true: Vec<f64>,
    pub seed: u64,
    /// Learner settings; the seed field is replaced per trial.
    pub train: TrainConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            a_values: DEFAULT_A_VALUES.to_vec(),
            n: 1000,
            trials: 20,
            methods: Method::ALL.to_vec(),
            w_true: vec![1.0, 0.0],
            seed: 0,
            train: TrainConfig {
                lambda: 1e-3,
                steps: 100_000,
                eta0: 0.1,
                seed: 0,
                crr_alpha: 0.5,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub method: Method,
    pub mean: f64,
    pub deviation: f64,
}

fn run_trial(config: &SweepConfig, a: f64, trial: usize) -> Result<Vec<f64>> {
    let seed = child_seed(config.seed, a, trial);
    let link = |s: u64| CappedLinkConfig {
        a,
        w_true: config.w_true.clone(),
        n: config.n,
        seed: s,
    };
    let train_set = generate(&link(child_seed(seed, 0.0, 1)))?;
    let test_set = generate(&link(child_seed(seed, 0.0, 2)))?;
    let eta = test_set.true_eta().expect("synthetic data carries true probabilities");
    let train_cfg = TrainConfig {
        seed: child_seed(seed, 0.0, 3),
        ..config.train
    };
    config
        .methods
        .iter()
        .map(|method| {
            let fitted = method.fit(&train_set, &train_cfg)?;
            let probs = test_set
                .rows()
                .iter()
                .map(|x| fitted.probability(x))
                .collect::<Result<Vec<_>>>()?;
            mse_to_truth(&probs, eta)
        })
        .collect()
}

/// For each `a` and trial, draws independent train and test sets, fits every
/// method on the train set, and measures squared error to the true
/// probabilities on the test set. Rows come out grouped by `a` in input
/// order, then by method in input order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if config.methods.is_empty() {
        return Err(Error::InvalidArgument("no methods to sweep".into()));
    }
    for &a in &config.a_values {
        CappedLinkConfig {
            a,
            w_true: config.w_true.clone(),
            n: config.n,
            seed: 0,
        }
        .validate()?;
    }

    let cells: Vec<(usize, usize)> = (0..config.a_values.len())
        .flat_map(|ai| (0..config.trials).map(move |t| (ai, t)))
        .collect();
    let results: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(ai, t)| run_trial(config, config.a_values[ai], t))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(config.a_values.len() * config.methods.len());
    for (ai, &a) in config.a_values.iter().enumerate() {
        let per_trial = &results[ai * config.trials..(ai + 1) * config.trials];
        for (mi, &method) in config.methods.iter().enumerate() {
            let errors: Vec<f64> = per_trial.iter().map(|r| r[mi]).collect();
            let (mean, deviation) = mean_and_deviation(&errors);
            rows.push(SweepRow {
                a,
                method,
                mean,
                deviation,
            });
        }
    }
    Ok(rows)
}
