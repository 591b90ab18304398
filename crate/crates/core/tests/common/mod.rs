//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankcal::data::FeatureVector;
use rankcal::sgd::{pairwise_step, pointwise_step, LinearModel, LossKind};

/// Every split of `0..n` into contiguous blocks, as lists of block ends.
pub fn contiguous_partitions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let cuts = n.saturating_sub(1);
    (0u64..1 << cuts).map(move |mask| {
        let mut ends: Vec<usize> = (0..cuts).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        ends.push(n);
        ends
    })
}

fn block_means(targets: &[f64], weights: &[f64], ends: &[usize]) -> Vec<f64> {
    let mut start = 0;
    let mut fit = Vec::with_capacity(targets.len());
    for &end in ends {
        let w: f64 = weights[start..end].iter().sum();
        let wy: f64 = (start..end).map(|i| weights[i] * targets[i]).sum();
        fit.extend(std::iter::repeat_n(wy / w, end - start));
        start = end;
    }
    fit
}

fn is_monotone(fit: &[f64]) -> bool {
    fit.windows(2).all(|p| p[0] <= p[1] + 1e-15)
}

/// Exhaustive monotone fit minimizing `loss` summed with `weights`; each
/// level set takes the weighted mean of its targets, which is the optimum
/// inside a block for squared and log loss alike.
pub fn brute_monotone_fit<L: Fn(f64, f64) -> f64>(targets: &[f64], weights: &[f64], loss: L) -> (Vec<f64>, f64) {
    let mut best: Option<(Vec<f64>, f64)> = None;
    for ends in contiguous_partitions(targets.len()) {
        let fit = block_means(targets, weights, &ends);
        if !is_monotone(&fit) {
            continue;
        }
        let total: f64 = (0..fit.len()).map(|i| weights[i] * loss(targets[i], fit[i])).sum();
        if best.as_ref().is_none_or(|(_, b)| total < *b) {
            best = Some((fit, total));
        }
    }
    best.expect("the single-block partition is always monotone")
}

pub fn squared(y: f64, p: f64) -> f64 {
    (y - p) * (y - p)
}

pub fn log_loss(y: f64, p: f64) -> f64 {
    let term = |t: f64, q: f64| if t == 0.0 { 0.0 } else { -t * q.ln() };
    term(y, p) + term(1.0 - y, 1.0 - p)
}

/// Pair counts by direct enumeration: (concordant, tied).
pub fn brute_pairs<T: PartialOrd>(keys: &[T], labels: &[bool]) -> (u64, u64) {
    let (mut concordant, mut tied) = (0, 0);
    for (i, ki) in keys.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, kj) in keys.iter().enumerate() {
            if labels[j] {
                continue;
            }
            if ki > kj {
                concordant += 1;
            } else if ki == kj {
                tied += 1;
            }
        }
    }
    (concordant, tied)
}

pub fn brute_auc_half<T: PartialOrd>(keys: &[T], labels: &[bool]) -> f64 {
    let (c, t) = brute_pairs(keys, labels);
    let pairs = labels.iter().filter(|&&l| l).count() * labels.iter().filter(|&&l| !l).count();
    (c as f64 + 0.5 * t as f64) / pairs as f64
}

/// Random labels with at least one of each class.
pub fn random_labels<R: Rng>(rng: &mut R, n: usize) -> Vec<bool> {
    assert!(n >= 2);
    loop {
        let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        if labels.iter().any(|&l| l) && labels.iter().any(|&l| !l) {
            return labels;
        }
    }
}

/// Scores drawn from a small grid so that ties are common.
pub fn random_scores<R: Rng>(rng: &mut R, n: usize, levels: i32) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0..levels) as f64 * 0.5 - 1.0).collect()
}

/// Central finite difference of `f` along coordinate `i` of `x`.
pub fn central_difference<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], i: usize, h: f64) -> f64 {
    let mut up = x.to_vec();
    let mut down = x.to_vec();
    up[i] += h;
    down[i] -= h;
    (f(&up) - f(&down)) / (2.0 * h)
}

/// Feature dimension of the loss oracles below.
pub const DIM: usize = 3;

pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// params = weights followed by bias
pub fn point_loss(kind: LossKind, params: &[f64], x: &[f64], y: bool) -> f64 {
    let s = dot(&params[..DIM], x) + params[DIM];
    let t = f64::from(u8::from(y));
    match kind {
        LossKind::Squared => (s - t) * (s - t),
        _ => {
            if y {
                softplus(-s)
            } else {
                softplus(s)
            }
        }
    }
}

pub fn pair_loss(params: &[f64], x_pos: &[f64], x_neg: &[f64]) -> f64 {
    softplus(dot(&params[..DIM], x_neg) - dot(&params[..DIM], x_pos))
}

const ETA: f64 = 0.01;

fn params_of(m: &LinearModel) -> Vec<f64> {
    let mut p = m.weights().to_vec();
    p.push(m.bias());
    p
}

// The step is theta - eta * grad, so grad = (theta - theta') / eta.
fn implied_gradient(before: &LinearModel, after: &LinearModel) -> Vec<f64> {
    params_of(before)
        .iter()
        .zip(params_of(after))
        .map(|(a, b)| (a - b) / ETA)
        .collect()
}

fn numeric_gradient<F: Fn(&[f64]) -> f64>(f: F, at: &[f64]) -> Vec<f64> {
    (0..at.len()).map(|i| central_difference(&f, at, i, 1e-5)).collect()
}

fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let diff: f64 = analytic
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = numeric.iter().map(|v| v * v).sum::<f64>().sqrt();
    diff / scale.max(1e-3)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-r..r)).collect()
}

fn random_model(rng: &mut ChaCha8Rng, kind: LossKind) -> LinearModel {
    LinearModel::new(random_vec(rng, DIM, 1.5), rng.random_range(-1.0..1.0), kind).unwrap()
}

fn fv(v: &[f64]) -> FeatureVector {
    FeatureVector::from_dense(v).unwrap()
}

/// Relative error between the update direction of one SGD step (at
/// `lambda = 0`) and the finite-difference gradient of the loss, at `count`
/// random points. CRR is checked as `alpha * pairwise + (1 - alpha) *
/// pointwise logistic` with a random `alpha` per point.
pub fn gradient_errors(kind: LossKind, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let model = random_model(&mut rng, kind);
            let xp = random_vec(&mut rng, DIM, 2.0);
            let xn = random_vec(&mut rng, DIM, 2.0);
            let x = random_vec(&mut rng, DIM, 2.0);
            let y = rng.random_bool(0.5);
            let alpha = rng.random_range(0.0..=1.0);
            let point = || implied_gradient(&model, &pointwise_step(&model, &fv(&x), y, ETA, 0.0).unwrap());
            let pair = || implied_gradient(&model, &pairwise_step(&model, &fv(&xp), &fv(&xn), ETA, 0.0).unwrap());
            let at = params_of(&model);
            let (analytic, numeric) = match kind {
                LossKind::Logistic | LossKind::Squared => {
                    (point(), numeric_gradient(|p| point_loss(kind, p, &x, y), &at))
                }
                LossKind::PairwiseLogistic => (pair(), numeric_gradient(|p| pair_loss(p, &xp, &xn), &at)),
                LossKind::Crr => {
                    let mixed = pair()
                        .iter()
                        .zip(point())
                        .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                        .collect();
                    let objective =
                        |p: &[f64]| alpha * pair_loss(p, &xp, &xn) + (1.0 - alpha) * point_loss(kind, p, &x, y);
                    (mixed, numeric_gradient(objective, &at))
                }
            };
            relative_error(&analytic, &numeric)
        })
        .collect()
}
