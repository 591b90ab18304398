//! Positive-unlabeled correction: with `c = Pr[labeled | positive]` and
//! labels selected completely at random, `Pr[y = 1 | x] = Pr[l = 1 | x] / c`.

use crate::error::{Error, Result};

/// Estimated labeling rate `c`, always in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuEstimate {
    c: f64,
}

impl PuEstimate {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "labeling rate must lie in (0, 1], got {c}"
            )));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Mean of `Pr[l = 1 | x]` over known (labeled) positives.
pub fn estimate_c(probs_labeled_positives: &[f64]) -> Result<PuEstimate> {
    if probs_labeled_positives.is_empty() {
        return Err(Error::Empty("labeled positives"));
    }
    if let Some(p) = probs_labeled_positives.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    let mean = probs_labeled_positives.iter().sum::<f64>() / probs_labeled_positives.len() as f64;
    if mean == 0.0 {
        return Err(Error::InvalidArgument(
            "labeled positives all have probability 0; c cannot be estimated".into(),
        ));
    }
    PuEstimate::new(mean.min(1.0))
}

/// `min(prob_labeled / c, 1)`.
pub fn pu_adjust(prob_labeled: f64, estimate: &PuEstimate) -> f64 {
    (prob_labeled / estimate.c).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimates() {
        assert!((estimate_c(&[0.6, 0.6, 0.6]).unwrap().c() - 0.6).abs() < 1e-15);
        assert_eq!(estimate_c(&[1.0]).unwrap().c(), 1.0);
        assert!(estimate_c(&[0.0, 0.0]).is_err());
        assert!(estimate_c(&[]).is_err());
        assert!(estimate_c(&[1.2]).is_err());
    }

    #[test]
    fn adjustments() {
        let c = PuEstimate::new(0.6).unwrap();
        assert!((pu_adjust(0.3, &c) - 0.5).abs() < 1e-15);
        assert_eq!(pu_adjust(0.9, &c), 1.0);
        assert_eq!(pu_adjust(0.0, &c), 0.0);
        assert!(PuEstimate::new(0.0).is_err());
        assert!(PuEstimate::new(1.1).is_err());
    }
}
