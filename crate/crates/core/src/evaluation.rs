//! Ranking and regression metrics, the campaign-profit utility, and the
//! worst-case squared-error bound for isotonic calibration of a ranker.

use std::cmp::Ordering;

use crate::calibration::CalibratedModel;
use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};
use crate::sgd::LinearModel;

/// How a positive/negative pair with equal scores counts toward the AUC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Half a concordant pair (the usual Mann-Whitney convention).
    #[default]
    Half,
    /// A full concordant pair: `1[s(x+) >= s(x-)]`.
    Geq,
    /// A discordant pair: `1[s(x+) > s(x-)]`.
    Strict,
}

/// Concordant and tied positive/negative pair counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub concordant: u64,
    pub tied: u64,
    pub n_pos: u64,
    pub n_neg: u64,
}

impl PairCounts {
    pub fn pairs(&self) -> u64 {
        self.n_pos * self.n_neg
    }

    pub fn discordant(&self) -> u64 {
        self.pairs() - self.concordant - self.tied
    }

    pub fn auc(&self, mode: TieMode) -> f64 {
        let pairs = self.pairs();
        match mode {
            TieMode::Half => (2 * self.concordant + self.tied) as f64 / (2 * pairs) as f64,
            TieMode::Geq => (self.concordant + self.tied) as f64 / pairs as f64,
            TieMode::Strict => self.concordant as f64 / pairs as f64,
        }
    }
}

/// Counts pairs in O(n log n): sort once, then walk groups of equal keys
/// while tracking how many negatives sit strictly below.
pub fn pair_counts_by<T, F>(keys: &[T], labels: &[bool], cmp: F) -> Result<PairCounts>
where
    F: Fn(&T, &T) -> Ordering,
{
    if keys.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: keys.len(),
            right: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&y| y).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::MissingClass { n_pos, n_neg });
    }

    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| cmp(&keys[a], &keys[b]));

    let (mut concordant, mut tied, mut neg_below) = (0u64, 0u64, 0u64);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && cmp(&keys[order[start]], &keys[order[end]]) == Ordering::Equal {
            end += 1;
        }
        let pos = order[start..end].iter().filter(|&&i| labels[i]).count() as u64;
        let neg = (end - start) as u64 - pos;
        concordant += pos * neg_below;
        tied += pos * neg;
        neg_below += neg;
        start = end;
    }
    Ok(PairCounts {
        concordant,
        tied,
        n_pos: n_pos as u64,
        n_neg: n_neg as u64,
    })
}

fn cmp_f64(a: &f64, b: &f64) -> Ordering {
    a.partial_cmp(b).expect("NaN rejected before comparison")
}

fn reject_nan(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument(format!("NaN in {what}")));
    }
    Ok(())
}

pub fn pair_counts(scores: &[f64], labels: &[bool]) -> Result<PairCounts> {
    reject_nan(scores, "scores")?;
    pair_counts_by(scores, labels, cmp_f64)
}

/// Empirical AUC: the fraction of positive/negative pairs ranked correctly.
pub fn auc(scores: &[f64], labels: &[bool], mode: TieMode) -> Result<f64> {
    Ok(pair_counts(scores, labels)?.auc(mode))
}

/// AUC of keys compared lexicographically (first component, then second).
pub fn auc_lexicographic(keys: &[(f64, f64)], labels: &[bool], mode: TieMode) -> Result<f64> {
    if keys.iter().any(|(a, b)| a.is_nan() || b.is_nan()) {
        return Err(Error::InvalidArgument("NaN in ranking keys".into()));
    }
    let counts = pair_counts_by(keys, labels, |a, b| {
        cmp_f64(&a.0, &b.0).then_with(|| cmp_f64(&a.1, &b.1))
    })?;
    Ok(counts.auc(mode))
}

fn mean_squared(a: &[f64], b: impl ExactSizeIterator<Item = f64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::Empty("predictions"));
    }
    Ok(a.iter().zip(b).map(|(p, t)| (t - p).powi(2)).sum::<f64>() / a.len() as f64)
}

/// Mean squared error against 0/1 labels.
pub fn mse(predictions: &[f64], labels: &[bool]) -> Result<f64> {
    mean_squared(predictions, labels.iter().map(|&y| f64::from(u8::from(y))))
}

/// Mean squared error against the true probabilities.
pub fn mse_to_truth(predictions: &[f64], true_eta: &[f64]) -> Result<f64> {
    mean_squared(predictions, true_eta.iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Contact,
    Skip,
}

/// Contact exactly when the expected gift `p * expected_gift` exceeds `cost`.
pub fn decide(probabilities: &[f64], expected_gift: f64, cost: f64) -> Vec<Decision> {
    probabilities
        .iter()
        .map(|p| {
            if p * expected_gift > cost {
                Decision::Contact
            } else {
                Decision::Skip
            }
        })
        .collect()
}

/// Sum of `donation - cost` over contacted individuals.
pub fn profit(decisions: &[Decision], donations: &[f64], cost: f64) -> Result<f64> {
    if decisions.len() != donations.len() {
        return Err(Error::LengthMismatch {
            left: decisions.len(),
            right: donations.len(),
        });
    }
    if !(cost > 0.0 && cost.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "contact cost must be positive, got {cost}"
        )));
    }
    Ok(decisions
        .iter()
        .zip(donations)
        .filter(|(d, _)| **d == Decision::Contact)
        .map(|(_, gift)| gift - cost)
        .sum())
}

/// `1/2 * sqrt(pi (1 - pi) (1 - auc_emp))` with `pi = n_pos / (n_pos + n_neg)`.
///
/// This is the training squared error isotonic regression reaches when all
/// discordant pairs come from one run of `a` positives below `b` negatives
/// (see [`worst_case_ranking`]); ties must be counted as discordant
/// ([`TieMode::Strict`]) for it to apply to tied scores. It is not an upper
/// bound for arbitrary orderings: labels ranked `1, 0, 1, 0` pool to a
/// constant 0.5 with error 0.25, above the value 0.2165 returned here.
pub fn discordance_bound(auc_emp: f64, n_pos: usize, n_neg: usize) -> Result<f64> {
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::MissingClass { n_pos, n_neg });
    }
    if !(0.0..=1.0).contains(&auc_emp) {
        return Err(Error::InvalidArgument(format!("AUC {auc_emp} outside [0, 1]")));
    }
    let pi = n_pos as f64 / (n_pos + n_neg) as f64;
    Ok(0.5 * (pi * (1.0 - pi) * (1.0 - auc_emp)).sqrt())
}

/// Scores realizing `a * b` discordant pairs in the worst placement: the
/// remaining negatives lowest, then `a` positives, then `b` negatives, then
/// the remaining positives. Isotonic regression pools the middle run to
/// `a / (a + b)` and its training squared error is `a b / ((a + b) n)`.
pub fn worst_case_ranking(n_pos: usize, n_neg: usize, a: usize, b: usize) -> Result<(Vec<f64>, Vec<bool>)> {
    if a == 0 || b == 0 || a > n_pos || b > n_neg {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= a <= {n_pos} and 1 <= b <= {n_neg}, got a = {a}, b = {b}"
        )));
    }
    let labels: Vec<bool> = std::iter::repeat_n(false, n_neg - b)
        .chain(std::iter::repeat_n(true, a))
        .chain(std::iter::repeat_n(false, b))
        .chain(std::iter::repeat_n(true, n_pos - a))
        .collect();
    let scores = (0..labels.len()).map(|i| i as f64).collect();
    Ok((scores, labels))
}

/// Sample mean and standard deviation (zero deviation for one value).
pub fn mean_and_deviation(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Anything that produces probabilities and a ranking key per example.
pub trait Predictor {
    fn probability(&self, x: &FeatureVector) -> Result<f64>;

    /// Key compared lexicographically to rank examples.
    fn rank_key(&self, x: &FeatureVector) -> Result<(f64, f64)>;
}

impl Predictor for LinearModel {
    fn probability(&self, x: &FeatureVector) -> Result<f64> {
        LinearModel::probability(self, x)
    }

    fn rank_key(&self, x: &FeatureVector) -> Result<(f64, f64)> {
        let s = self.score(x)?;
        Ok((s, s))
    }
}

impl Predictor for CalibratedModel {
    fn probability(&self, x: &FeatureVector) -> Result<f64> {
        CalibratedModel::probability(self, x)
    }

    fn rank_key(&self, x: &FeatureVector) -> Result<(f64, f64)> {
        CalibratedModel::rank_key(self, x)
    }
}

/// Inputs for the profit column.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfitOptions {
    pub donations: Vec<f64>,
    pub cost: f64,
    pub expected_gift: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalOptions {
    pub tie_mode: TieMode,
    pub profit: Option<ProfitOptions>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub auc: f64,
    pub tie_mode: TieMode,
    pub mse: f64,
    pub mse_to_truth: Option<f64>,
    pub profit: Option<f64>,
    pub discordance_bound: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub base_rate: f64,
}

impl EvalReport {
    /// Builds a report from precomputed probabilities and ranking keys.
    pub fn from_predictions(
        probabilities: &[f64],
        rank_keys: &[(f64, f64)],
        labels: &[bool],
        true_eta: Option<&[f64]>,
        options: &EvalOptions,
    ) -> Result<EvalReport> {
        if probabilities.len() != rank_keys.len() {
            return Err(Error::LengthMismatch {
                left: probabilities.len(),
                right: rank_keys.len(),
            });
        }
        let auc = auc_lexicographic(rank_keys, labels, options.tie_mode)?;
        let mse = mse(probabilities, labels)?;
        let mse_to_truth = true_eta.map(|eta| mse_to_truth(probabilities, eta)).transpose()?;
        let profit = options
            .profit
            .as_ref()
            .map(|p| {
                let decisions = decide(probabilities, p.expected_gift, p.cost);
                profit(&decisions, &p.donations, p.cost)
            })
            .transpose()?;
        let n_pos = labels.iter().filter(|&&y| y).count();
        let n_neg = labels.len() - n_pos;
        Ok(EvalReport {
            auc,
            tie_mode: options.tie_mode,
            mse,
            mse_to_truth,
            profit,
            discordance_bound: discordance_bound(auc, n_pos, n_neg)?,
            n_pos,
            n_neg,
            base_rate: n_pos as f64 / (n_pos + n_neg) as f64,
        })
    }
}

/// Scores every row of `data` and assembles an [`EvalReport`].
pub fn evaluate(model: &dyn Predictor, data: &Dataset, options: &EvalOptions) -> Result<EvalReport> {
    let probabilities = data
        .rows()
        .iter()
        .map(|x| model.probability(x))
        .collect::<Result<Vec<_>>>()?;
    let keys = data
        .rows()
        .iter()
        .map(|x| model.rank_key(x))
        .collect::<Result<Vec<_>>>()?;
    EvalReport::from_predictions(&probabilities, &keys, data.labels(), data.true_eta(), options)
}
