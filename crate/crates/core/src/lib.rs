//! Accurate class probabilities from a ranking loss.
//!
//! A linear scorer is trained to order positives above negatives with a
//! pairwise logistic loss, and its scores are then mapped to probabilities by
//! isotonic regression. The crate also carries the usual baselines
//! (logistic, truncated linear, and combined regression-and-ranking
//! learners), evaluation metrics, and a synthetic benchmark.
//!
//! ```
//! use rankcal::calibration::calibrate;
//! use rankcal::evaluation::{evaluate, EvalOptions};
//! use rankcal::sgd::{train, LossKind, TrainConfig};
//! use rankcal::synthetic::{generate, CappedLinkConfig};
//!
//! let data = generate(&CappedLinkConfig::new(0.125, 500, 7)).unwrap();
//! let ranker = train(&data, LossKind::PairwiseLogistic, &TrainConfig::default()).unwrap();
//! let model = calibrate(&ranker, &data).unwrap();
//! let report = evaluate(&model, &data, &EvalOptions::default()).unwrap();
//! assert!(report.auc > 0.7);
//! assert!(report.mse_to_truth.unwrap() < 0.02);
//! ```
//!
//! The `book/` directory next to the workspace walks through each piece;
//! its code listings are compiled and run as doc-tests of this crate.

pub mod calibration;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod methods;
pub mod sgd;
pub mod synthetic;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/calibration.md")]
    mod calibration {}
    #[doc = include_str!("../../../book/src/ranking.md")]
    mod ranking {}
    #[doc = include_str!("../../../book/src/auc.md")]
    mod auc {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    mod synthetic {}
    #[doc = include_str!("../../../book/src/pu.md")]
    mod pu {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
