use std::io::Write;

use anyhow::{bail, Context, Result};
use rankcal::calibration::calibrate;
use rankcal::data::{split_indices, Centering, Dataset, Scaling, SplitSpec};
use rankcal::evaluation::{auc_lexicographic, decide, mse, profit, Predictor, TieMode};
use rankcal::methods::Fitted;
use rankcal::sgd::{train, LinearModel, LossKind, TrainConfig};
use rayon::prelude::*;

use crate::args::{Format, HyperArgs, SelectBy, Standardize, TrainArgs};
use crate::input::{self, Extras};
use crate::model_file::{GridSearch, ModelFile, Reserve, TrainingInfo};

pub const DEFAULT_GRID_LAMBDA: [f64; 6] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0];
pub const DEFAULT_GRID_ETA0: [f64; 3] = [0.01, 0.1, 1.0];

pub fn config(hyper: &HyperArgs) -> TrainConfig {
    TrainConfig {
        lambda: hyper.lambda,
        steps: hyper.steps,
        eta0: hyper.eta0,
        seed: hyper.seed,
        crr_alpha: hyper.crr_alpha,
    }
}

pub fn centering(mode: Standardize, format: Format) -> Option<Centering> {
    match (mode, format) {
        (Standardize::None, _) => None,
        (Standardize::Center, _) | (Standardize::Auto, Format::Csv) => Some(Centering::Center),
        (Standardize::Scale, _) | (Standardize::Auto, Format::Sparse) => Some(Centering::ScaleOnly),
    }
}

fn standardize_name(c: Option<Centering>) -> &'static str {
    match c {
        None => "none",
        Some(Centering::Center) => "center",
        Some(Centering::ScaleOnly) => "scale",
    }
}

/// Trains on standardized features and folds the scaling back into the
/// weights, so the result scores raw rows.
pub fn fit_linear(
    data: &Dataset,
    kind: LossKind,
    cfg: &TrainConfig,
    centering: Option<Centering>,
) -> Result<LinearModel> {
    match centering {
        None => Ok(train(data, kind, cfg)?),
        Some(c) => {
            let scaling = Scaling::fit(data, c)?;
            let model = train(&scaling.apply_dataset(data)?, kind, cfg)?;
            Ok(model.unscaled(&scaling)?)
        }
    }
}

/// Mean donation among positive rows.
pub fn mean_positive_gift(labels: &[bool], donations: &[f64]) -> Result<f64> {
    let gifts: Vec<f64> = labels
        .iter()
        .zip(donations)
        .filter(|(y, _)| **y)
        .map(|(_, d)| *d)
        .collect();
    if gifts.is_empty() {
        bail!("no positive rows to estimate the expected gift from");
    }
    Ok(gifts.iter().sum::<f64>() / gifts.len() as f64)
}

struct Profit<'a> {
    donations: &'a [f64],
    cost: f64,
}

/// Higher is better for every metric (mse is negated).
fn validation_score(
    predictor: &dyn Predictor,
    data: &Dataset,
    select_by: SelectBy,
    profit_data: Option<&Profit>,
    fit_labels: &[bool],
    fit_donations: Option<&[f64]>,
) -> Result<f64> {
    let probs = || -> Result<Vec<f64>> { data.rows().iter().map(|x| Ok(predictor.probability(x)?)).collect() };
    match select_by {
        SelectBy::Auc => {
            let keys = data
                .rows()
                .iter()
                .map(|x| predictor.rank_key(x))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(auc_lexicographic(&keys, data.labels(), TieMode::Half)?)
        }
        SelectBy::Mse => Ok(-mse(&probs()?, data.labels())?),
        SelectBy::Profit => {
            let p = profit_data.context("profit selection needs --donation-column and --cost")?;
            let gift = mean_positive_gift(fit_labels, fit_donations.context("missing donations")?)?;
            let decisions = decide(&probs()?, gift, p.cost);
            Ok(profit(&decisions, p.donations, p.cost)?)
        }
    }
}

pub fn run(args: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let mut side = Vec::new();
    if let Some(col) = &args.profit.donation_column {
        side.push(col.clone());
    }
    let loaded = input::load(
        &args.data,
        &Extras {
            side,
            ..Extras::default()
        },
    )?;
    let total_rows = loaded.dataset.len();
    let hyper = &args.hyper;
    let kind = args.method.loss();
    let centering = centering(hyper.standardize, loaded.format);
    let donations_all = args.profit.donation_column.as_ref().map(|c| loaded.side[c].clone());

    let (data, donations, reserve) = match args.reserve_calibration {
        None => (loaded.dataset.clone(), donations_all, None),
        Some(fraction) => {
            if !(fraction > 0.0 && fraction < 1.0) {
                bail!("--reserve-calibration must lie in (0, 1), got {fraction}");
            }
            let spec = SplitSpec::new(1.0 - fraction, hyper.seed, true)?;
            let (keep, _) = split_indices(&loaded.dataset, &spec)?;
            let donations = donations_all.map(|d| keep.iter().map(|&i| d[i]).collect::<Vec<_>>());
            let reserve = Reserve {
                fraction,
                seed: hyper.seed,
                total_rows,
            };
            (loaded.dataset.subset(&keep), donations, Some(reserve))
        }
    };

    let mut cfg = config(hyper);
    cfg.validate()?;
    let grid_requested = args.grid || args.grid_lambda.is_some() || args.grid_eta0.is_some();
    let grid = if grid_requested {
        let lambdas = args.grid_lambda.clone().unwrap_or_else(|| DEFAULT_GRID_LAMBDA.to_vec());
        let etas = args.grid_eta0.clone().unwrap_or_else(|| DEFAULT_GRID_ETA0.to_vec());
        let (best, score) = grid_search(
            &data,
            donations.as_deref(),
            kind,
            &cfg,
            centering,
            args,
            &lambdas,
            &etas,
        )?;
        cfg.lambda = best.0;
        cfg.eta0 = best.1;
        Some(GridSearch {
            lambda: lambdas,
            eta0: etas,
            selected_by: format!("{:?}", args.select_by).to_lowercase(),
            validation_fraction: args.validation_fraction,
            best_score: score,
        })
    } else {
        None
    };

    let model = fit_linear(&data, kind, &cfg, centering)?;
    let info = TrainingInfo {
        method: format!("{:?}", args.method).to_lowercase(),
        seed: cfg.seed,
        lambda: cfg.lambda,
        steps: cfg.steps,
        eta0: cfg.eta0,
        crr_alpha: cfg.crr_alpha,
        standardize: standardize_name(centering).into(),
        training_rows: data.len(),
        grid,
        reserve,
        calibration: None,
    };
    ModelFile::from_linear(&model, loaded.feature_names, info).save(&args.out)?;
    writeln!(
        out,
        "wrote {} (lambda={} eta0={} rows={})",
        args.out.display(),
        cfg.lambda,
        cfg.eta0,
        data.len()
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn grid_search(
    data: &Dataset,
    donations: Option<&[f64]>,
    kind: LossKind,
    base: &TrainConfig,
    centering: Option<Centering>,
    args: &TrainArgs,
    lambdas: &[f64],
    etas: &[f64],
) -> Result<((f64, f64), f64)> {
    if lambdas.is_empty() || etas.is_empty() {
        bail!("grids must not be empty");
    }
    if let Some(bad) = lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        bail!("invalid lambda {bad} in grid");
    }
    if let Some(bad) = etas.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        bail!("invalid eta0 {bad} in grid");
    }
    let f = args.validation_fraction;
    if !(f > 0.0 && f < 1.0) {
        bail!("--validation-fraction must lie in (0, 1), got {f}");
    }
    if args.select_by == SelectBy::Profit && (donations.is_none() || args.profit.cost.is_none()) {
        bail!("--select-by profit needs --donation-column and --cost");
    }

    let spec = SplitSpec::new(1.0 - f, base.seed.wrapping_add(1), true)?;
    let (fit_idx, val_idx) = split_indices(data, &spec)?;
    let fit_part = data.subset(&fit_idx);
    let val_part = data.subset(&val_idx);
    let fit_donations = donations.map(|d| fit_idx.iter().map(|&i| d[i]).collect::<Vec<_>>());
    let val_donations = donations.map(|d| val_idx.iter().map(|&i| d[i]).collect::<Vec<_>>());
    let profit_data = match (&val_donations, args.profit.cost) {
        (Some(d), Some(cost)) => Some(Profit { donations: d, cost }),
        _ => None,
    };

    let cells: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| etas.iter().map(move |&e| (l, e)))
        .collect();
    let scores: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(lambda, eta0)| {
            let cfg = TrainConfig { lambda, eta0, ..*base };
            let model = fit_linear(&fit_part, kind, &cfg, centering).ok()?;
            let predictor = if kind == LossKind::PairwiseLogistic && args.select_by != SelectBy::Auc {
                Fitted::Calibrated(calibrate(&model, &fit_part).ok()?)
            } else {
                Fitted::Linear(model)
            };
            validation_score(
                &predictor,
                &val_part,
                args.select_by,
                profit_data.as_ref(),
                fit_part.labels(),
                fit_donations.as_deref(),
            )
            .ok()
            .filter(|s| s.is_finite())
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.iter().enumerate() {
        if let Some(s) = *s {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
    }
    let (i, score) = best.context("every grid cell failed to train (diverged or degenerate split)")?;
    let score = if args.select_by == SelectBy::Mse { -score } else { score };
    Ok((cells[i], score))
}
