//! The six estimators compared throughout: truncated linear regression,
//! logistic regression, each with and without isotonic post-processing,
//! combined regression and ranking, and the pairwise ranker followed by
//! isotonic regression.

use std::fmt;
use std::str::FromStr;

use crate::calibration::{calibrate, CalibratedModel};
use crate::data::{Dataset, FeatureVector};
use crate::error::{Error, Result};
use crate::evaluation::Predictor;
use crate::sgd::{train, LinearModel, LossKind, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    LinReg,
    LinRegIr,
    LogReg,
    LogRegIr,
    Crr,
    RankIr,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::LinReg,
        Method::LinRegIr,
        Method::LogReg,
        Method::LogRegIr,
        Method::Crr,
        Method::RankIr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LinReg => "linreg",
            Method::LinRegIr => "linreg+ir",
            Method::LogReg => "logreg",
            Method::LogRegIr => "logreg+ir",
            Method::Crr => "crr",
            Method::RankIr => "rank+ir",
        }
    }

    pub fn loss(self) -> LossKind {
        match self {
            Method::LinReg | Method::LinRegIr => LossKind::Squared,
            Method::LogReg | Method::LogRegIr => LossKind::Logistic,
            Method::Crr => LossKind::Crr,
            Method::RankIr => LossKind::PairwiseLogistic,
        }
    }

    pub fn is_calibrated(self) -> bool {
        matches!(self, Method::LinRegIr | Method::LogRegIr | Method::RankIr)
    }

    /// Trains the base learner on `train_set` and, for the `+ir` methods,
    /// fits the isotonic map on the same rows.
    pub fn fit(self, train_set: &Dataset, config: &TrainConfig) -> Result<Fitted> {
        let model = train(train_set, self.loss(), config)?;
        if self.is_calibrated() {
            Ok(Fitted::Calibrated(calibrate(&model, train_set)?))
        } else {
            Ok(Fitted::Linear(model))
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method {s:?} (expected one of linreg, linreg+ir, logreg, logreg+ir, crr, rank+ir)"
                ))
            })
    }
}

/// A trained estimator: a bare linear model or a calibrated one.
#[derive(Debug, Clone, PartialEq)]
pub enum Fitted {
    Linear(LinearModel),
    Calibrated(CalibratedModel),
}

impl Fitted {
    pub fn linear(&self) -> &LinearModel {
        match self {
            Fitted::Linear(m) => m,
            Fitted::Calibrated(c) => c.ranker(),
        }
    }
}

impl Predictor for Fitted {
    fn probability(&self, x: &FeatureVector) -> Result<f64> {
        match self {
            Fitted::Linear(m) => m.probability(x),
            Fitted::Calibrated(c) => c.probability(x),
        }
    }

    fn rank_key(&self, x: &FeatureVector) -> Result<(f64, f64)> {
        match self {
            Fitted::Linear(m) => Predictor::rank_key(m, x),
            Fitted::Calibrated(c) => c.rank_key(x),
        }
    }
}
