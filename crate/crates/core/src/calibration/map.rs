use std::cmp::Ordering;

use super::pav::pool_adjacent;
use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};
use crate::sgd::LinearModel;

/// Monotone piecewise-linear link from raw score to probability.
///
/// Breakpoint scores strictly increase and values never decrease. Between
/// breakpoints the map interpolates linearly; outside them it holds the
/// nearest endpoint value, so a test score above every training score
/// inherits the top value.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationMap {
    breakpoints: Vec<(f64, f64)>,
}

impl CalibrationMap {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Empty("calibration breakpoints"));
        }
        for &(s, v) in &breakpoints {
            if !s.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "breakpoint ({s}, {v}) needs a finite score and a value in [0, 1]"
                )));
            }
        }
        for pair in breakpoints.windows(2) {
            let ((s0, v0), (s1, v1)) = (pair[0], pair[1]);
            if s1 <= s0 || v1 < v0 {
                return Err(Error::InvalidArgument(format!(
                    "breakpoints ({s0}, {v0}) and ({s1}, {v1}) are not monotone"
                )));
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![(0.0, value)])
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Calibrated value of `score`. NaN maps to NaN.
    pub fn apply(&self, score: f64) -> f64 {
        if score.is_nan() {
            return f64::NAN;
        }
        let bp = &self.breakpoints;
        let (first, last) = (bp[0], bp[bp.len() - 1]);
        if score <= first.0 {
            return first.1;
        }
        if score >= last.0 {
            return last.1;
        }
        // bp[j - 1].0 <= score < bp[j].0
        let j = bp.partition_point(|&(s, _)| s <= score);
        let (s0, v0) = bp[j - 1];
        let (s1, v1) = bp[j];
        let t = (score - s0) / (s1 - s0);
        // the clamp keeps adjacent segments from overlapping by an ulp,
        // which would break monotonicity
        (v0 + (v1 - v0) * t).clamp(v0, v1)
    }
}

/// Where each PAV block places its breakpoints on the score axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Anchor {
    /// One breakpoint at each end of the block's score range. The map is flat
    /// across a block, so every training score maps to its exact PAV value.
    #[default]
    BlockEnds,
    /// A single breakpoint at the weighted mean score of the block.
    BlockMean,
}

/// A PAV block annotated with the raw scores it covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotonicBlock {
    pub value: f64,
    pub weight: f64,
    pub score_lo: f64,
    pub score_hi: f64,
    pub score_mean: f64,
}

fn check_scores(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::Empty("calibration scores"));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite score {s}")));
    }
    Ok(())
}

/// Sorts by score, pools identical scores into one weighted target, and runs
/// PAV. Blocks come back in ascending score order.
pub fn isotonic_blocks(scores: &[f64], labels: &[bool]) -> Result<Vec<IsotonicBlock>> {
    check_scores(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));

    // (score, count, positives) per distinct score
    let mut groups: Vec<(f64, f64, f64)> = Vec::new();
    for &i in &order {
        let y = f64::from(u8::from(labels[i]));
        match groups.last_mut() {
            Some(g) if g.0 == scores[i] => {
                g.1 += 1.0;
                g.2 += y;
            }
            _ => groups.push((scores[i], 1.0, y)),
        }
    }

    let pools = pool_adjacent(groups.iter().map(|&(_, n, pos)| (n, pos)));
    Ok(pools
        .into_iter()
        .map(|p| {
            let members = &groups[p.start..p.end];
            let lo = members[0].0;
            let hi = members[members.len() - 1].0;
            let mean = members.iter().map(|g| g.0 * g.1).sum::<f64>() / p.sum_w;
            IsotonicBlock {
                value: p.value().clamp(0.0, 1.0),
                weight: p.sum_w,
                score_lo: lo,
                score_hi: hi,
                score_mean: mean.clamp(lo, hi),
            }
        })
        .collect())
}

/// Isotonic calibration map with the default [`Anchor`].
pub fn fit_isotonic(scores: &[f64], labels: &[bool]) -> Result<CalibrationMap> {
    fit_isotonic_with(scores, labels, Anchor::default())
}

pub fn fit_isotonic_with(scores: &[f64], labels: &[bool], anchor: Anchor) -> Result<CalibrationMap> {
    let blocks = isotonic_blocks(scores, labels)?;
    let mut breakpoints = Vec::with_capacity(2 * blocks.len());
    for b in &blocks {
        match anchor {
            Anchor::BlockEnds => {
                breakpoints.push((b.score_lo, b.value));
                if b.score_hi > b.score_lo {
                    breakpoints.push((b.score_hi, b.value));
                }
            }
            Anchor::BlockMean => breakpoints.push((b.score_mean, b.value)),
        }
    }
    CalibrationMap::new(breakpoints)
}

/// A ranker composed with its calibration map.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedModel {
    ranker: LinearModel,
    map: CalibrationMap,
}

impl CalibratedModel {
    pub fn new(ranker: LinearModel, map: CalibrationMap) -> Self {
        Self { ranker, map }
    }

    pub fn ranker(&self) -> &LinearModel {
        &self.ranker
    }

    pub fn map(&self) -> &CalibrationMap {
        &self.map
    }

    pub fn probability(&self, x: &FeatureVector) -> Result<f64> {
        Ok(self.map.apply(self.ranker.score(x)?))
    }

    /// `(calibrated value, raw score)`, compared lexicographically. Ties in
    /// the calibrated value fall back to the ranker's own order.
    pub fn rank_key(&self, x: &FeatureVector) -> Result<(f64, f64)> {
        let s = self.ranker.score(x)?;
        Ok((self.map.apply(s), s))
    }
}

/// Scores `data` with `ranker` and fits an isotonic map to those scores.
pub fn calibrate(ranker: &LinearModel, data: &Dataset) -> Result<CalibratedModel> {
    calibrate_with(ranker, data, Anchor::default())
}

pub fn calibrate_with(ranker: &LinearModel, data: &Dataset, anchor: Anchor) -> Result<CalibratedModel> {
    if data.is_empty() {
        return Err(Error::Empty("calibration set"));
    }
    let scores = data
        .rows()
        .iter()
        .map(|x| ranker.score(x))
        .collect::<Result<Vec<_>>>()?;
    let map = fit_isotonic_with(&scores, data.labels(), anchor)?;
    Ok(CalibratedModel::new(ranker.clone(), map))
}
