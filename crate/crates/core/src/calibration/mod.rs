//! Isotonic calibration of raw scores.
//!
//! [`fit_pav`] solves the weighted monotone least-squares problem with the
//! pool-adjacent-violators algorithm. [`fit_isotonic`] sorts raw scores,
//! pools exact ties, runs PAV and turns the blocks into a piecewise-linear
//! [`CalibrationMap`]. [`calibrate`] composes a map with a ranker.
//!
//! Because the map is non-decreasing, ranking by the pair
//! `(calibrated value, raw score)` orders examples exactly as the raw score
//! does, so calibration never changes the empirical AUC.

mod map;
mod pav;
mod pu;

pub use map::{
    calibrate, calibrate_with, fit_isotonic, fit_isotonic_with, isotonic_blocks, Anchor, CalibratedModel,
    CalibrationMap, IsotonicBlock,
};
pub use pav::{expand_blocks, fit_pav, PavBlock};
pub use pu::{estimate_c, pu_adjust, PuEstimate};
