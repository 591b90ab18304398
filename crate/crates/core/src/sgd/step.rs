use super::{LinearModel, LossKind};
use crate::data::FeatureVector;
use crate::error::{Error, Result};

/// Logistic function, evaluated without overflow for large `|z|`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Multiplier applied to the weights by the l2 term in one step. Clamped at
/// zero so an oversized step cannot flip the sign of the weights.
pub(crate) fn shrink_factor(eta: f64, lambda: f64) -> f64 {
    (1.0 - eta * lambda).max(0.0)
}

/// Derivative of the pointwise loss with respect to the score.
pub(crate) fn pointwise_slope(kind: LossKind, score: f64, y: bool) -> f64 {
    let y = f64::from(u8::from(y));
    match kind {
        LossKind::Squared => 2.0 * (score - y),
        _ => sigmoid(score) - y,
    }
}

/// Negative derivative of the pairwise logistic loss with respect to the margin.
pub(crate) fn pairwise_pull(margin: f64) -> f64 {
    sigmoid(-margin)
}

fn check_step(eta: f64, lambda: f64) -> Result<()> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be >= 0, got {eta}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(())
}

/// One SGD step on a single labeled example.
///
/// Logistic (and the pointwise half of CRR):
/// `w <- (1 - eta*lambda) w - eta (sigmoid(s) - y) x`.
/// Squared: `w <- (1 - eta*lambda) w - 2 eta (s - y) x`.
/// The bias takes the same gradient step without the shrink.
pub fn pointwise_step(model: &LinearModel, x: &FeatureVector, y: bool, eta: f64, lambda: f64) -> Result<LinearModel> {
    if model.kind() == LossKind::PairwiseLogistic {
        return Err(Error::UnsupportedLoss {
            operation: "pointwise step",
            kind: model.kind().name(),
        });
    }
    check_step(eta, lambda)?;
    let score = model.score(x)?;
    let g = pointwise_slope(model.kind(), score, y);
    let shrink = shrink_factor(eta, lambda);

    let (mut w, mut b) = model.clone().into_parts();
    w.iter_mut().for_each(|wj| *wj *= shrink);
    for &(i, v) in x.entries() {
        w[i] -= eta * g * v;
    }
    b -= eta * g;
    LinearModel::new(w, b, model.kind())
}

/// One SGD step on a positive/negative pair.
///
/// With `d = x_pos - x_neg` and margin `m = w.d`:
/// `w <- (1 - eta*lambda) w + eta sigmoid(-m) d`. The bias cancels in the
/// margin and is left alone.
pub fn pairwise_step(
    model: &LinearModel,
    x_pos: &FeatureVector,
    x_neg: &FeatureVector,
    eta: f64,
    lambda: f64,
) -> Result<LinearModel> {
    if !matches!(model.kind(), LossKind::PairwiseLogistic | LossKind::Crr) {
        return Err(Error::UnsupportedLoss {
            operation: "pairwise step",
            kind: model.kind().name(),
        });
    }
    check_step(eta, lambda)?;
    let margin = model.score(x_pos)? - model.score(x_neg)?;
    let c = eta * pairwise_pull(margin);
    let shrink = shrink_factor(eta, lambda);

    let (mut w, b) = model.clone().into_parts();
    w.iter_mut().for_each(|wj| *wj *= shrink);
    for &(i, v) in x_pos.entries() {
        w[i] += c * v;
    }
    for &(i, v) in x_neg.entries() {
        w[i] -= c * v;
    }
    LinearModel::new(w, b, model.kind())
}
