use std::io::Write;

use anyhow::{bail, Context, Result};
use rankcal::calibration::calibrate;
use rankcal::data::{split_indices, Dataset, SplitSpec};
use rankcal::evaluation::{
    auc, discordance_bound, evaluate, mean_and_deviation, EvalOptions, EvalReport, Predictor, ProfitOptions, TieMode,
};
use rankcal::methods::{Fitted, Method};
use rankcal::sgd::{LinearModel, LossKind, TrainConfig};
use rankcal::synthetic::child_seed;
use rayon::prelude::*;

use crate::args::EvalArgs;
use crate::input::{self, Extras, Input};
use crate::model_file::ModelFile;
use crate::train::{centering, config, fit_linear, mean_positive_gift};

fn tie_name(mode: TieMode) -> &'static str {
    match mode {
        TieMode::Half => "half",
        TieMode::Geq => "geq",
        TieMode::Strict => "strict",
    }
}

pub fn run(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    if args.profit.donation_column.is_some() && args.profit.cost.is_none() {
        bail!("profit needs an explicit --cost (there is no default)");
    }
    if args.profit.cost.is_some() && args.profit.donation_column.is_none() {
        bail!("--cost needs --donation-column");
    }
    let model_file = args.model.as_deref().map(ModelFile::load).transpose()?;
    let extras = Extras {
        truth: args.truth_column.clone(),
        side: args.profit.donation_column.iter().cloned().collect(),
        model_features: model_file.as_ref().and_then(|f| f.feature_names.clone()),
        label_optional: false,
    };
    let loaded = input::load(&args.data, &extras)?;

    match (&model_file, &args.predictions, args.splits) {
        (Some(file), _, _) => {
            let predictor = file.predictor()?;
            let data = input::fit_dimension(loaded.dataset.clone(), file.linear()?.dimension())?;
            if let Fitted::Linear(m) = &predictor {
                if m.kind() == LossKind::PairwiseLogistic {
                    return render_ranking(m, &data, args.tie_mode.into(), out);
                }
            }
            let report = evaluate(&predictor, &data, &options(args, &loaded, data.labels())?)?;
            render_report(&report, out)
        }
        (None, Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let probs = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .enumerate()
                .map(|(i, l)| {
                    let first = l.split(',').next().unwrap_or("").trim();
                    first
                        .parse::<f64>()
                        .with_context(|| format!("{} line {}: cannot parse {first:?}", path.display(), i + 1))
                })
                .collect::<Result<Vec<f64>>>()?;
            let data = &loaded.dataset;
            if probs.len() != data.len() {
                bail!("{} predictions for {} rows", probs.len(), data.len());
            }
            let keys: Vec<(f64, f64)> = probs.iter().map(|&p| (p, p)).collect();
            let opts = options(args, &loaded, data.labels())?;
            let report = EvalReport::from_predictions(&probs, &keys, data.labels(), data.true_eta(), &opts)?;
            render_report(&report, out)
        }
        (None, None, Some(k)) => run_splits(args, &loaded, k, out),
        (None, None, None) => bail!("pass one of --model, --predictions or --splits"),
    }
}

fn options(args: &EvalArgs, loaded: &Input, fit_labels: &[bool]) -> Result<EvalOptions> {
    let profit = match (&args.profit.donation_column, args.profit.cost) {
        (Some(col), Some(cost)) => {
            let donations = loaded.side[col].clone();
            let expected_gift = match args.profit.expected_gift {
                Some(g) => g,
                None => mean_positive_gift(fit_labels, &donations)?,
            };
            Some(ProfitOptions {
                donations,
                cost,
                expected_gift,
            })
        }
        _ => None,
    };
    Ok(EvalOptions {
        tie_mode: args.tie_mode.into(),
        profit,
    })
}

/// AUC-only report for an uncalibrated ranker.
fn render_ranking(model: &LinearModel, data: &Dataset, mode: TieMode, out: &mut dyn Write) -> Result<()> {
    let scores = data
        .rows()
        .iter()
        .map(|x| model.score(x))
        .collect::<Result<Vec<_>, _>>()?;
    let auc = auc(&scores, data.labels(), mode)?;
    let bound = discordance_bound(auc, data.n_pos(), data.n_neg())?;
    writeln!(out, "{:<20}{auc:>12.6}", format!("auc ({})", tie_name(mode)))?;
    writeln!(out, "{:<20}{:>12}", "mse", "n/a")?;
    writeln!(out, "{:<20}{bound:>12.6}", "discordance_bound")?;
    writeln!(out, "{:<20}{:>12}", "n_pos", data.n_pos())?;
    writeln!(out, "{:<20}{:>12}", "n_neg", data.n_neg())?;
    writeln!(out, "(uncalibrated ranker: run `rankcal calibrate` for probabilities)")?;
    writeln!(out)?;
    writeln!(out, "auc={auc}")?;
    writeln!(out, "tie_mode={}", tie_name(mode))?;
    writeln!(out, "discordance_bound={bound}")?;
    writeln!(out, "n_pos={}", data.n_pos())?;
    writeln!(out, "n_neg={}", data.n_neg())?;
    Ok(())
}

fn render_report(r: &EvalReport, out: &mut dyn Write) -> Result<()> {
    let mut rows: Vec<(String, f64)> = vec![
        (format!("auc ({})", tie_name(r.tie_mode)), r.auc),
        ("mse".into(), r.mse),
    ];
    if let Some(v) = r.mse_to_truth {
        rows.push(("mse_to_truth".into(), v));
    }
    if let Some(v) = r.profit {
        rows.push(("profit".into(), v));
    }
    rows.push(("discordance_bound".into(), r.discordance_bound));
    rows.push(("base_rate".into(), r.base_rate));
    for (name, v) in &rows {
        writeln!(out, "{name:<20}{v:>12.6}")?;
    }
    writeln!(out, "{:<20}{:>12}", "n_pos", r.n_pos)?;
    writeln!(out, "{:<20}{:>12}", "n_neg", r.n_neg)?;
    writeln!(out)?;
    writeln!(out, "auc={}", r.auc)?;
    writeln!(out, "tie_mode={}", tie_name(r.tie_mode))?;
    writeln!(out, "mse={}", r.mse)?;
    if let Some(v) = r.mse_to_truth {
        writeln!(out, "mse_to_truth={v}")?;
    }
    if let Some(v) = r.profit {
        writeln!(out, "profit={v}")?;
    }
    writeln!(out, "discordance_bound={}", r.discordance_bound)?;
    writeln!(out, "base_rate={}", r.base_rate)?;
    writeln!(out, "n_pos={}", r.n_pos)?;
    writeln!(out, "n_neg={}", r.n_neg)?;
    Ok(())
}

fn run_splits(args: &EvalArgs, loaded: &Input, k: usize, out: &mut dyn Write) -> Result<()> {
    if k == 0 {
        bail!("--splits must be positive");
    }
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<Method>())
        .collect::<Result<Vec<_>, _>>()?;
    let data = &loaded.dataset;
    let base = config(&args.hyper);
    base.validate()?;
    let centering = centering(args.hyper.standardize, loaded.format);
    let donation_col = args.profit.donation_column.as_ref();

    // reports[split][method]
    let reports: Vec<Vec<EvalReport>> = (0..k)
        .into_par_iter()
        .map(|split| -> Result<Vec<EvalReport>> {
            let seed = child_seed(args.hyper.seed, 0.0, split);
            let spec = SplitSpec::new(args.train_fraction, seed, true)?;
            let (train_idx, test_idx) = split_indices(data, &spec)?;
            let train = data.subset(&train_idx);
            let test = data.subset(&test_idx);
            let profit = match (donation_col, args.profit.cost) {
                (Some(col), Some(cost)) => {
                    let all = &loaded.side[col];
                    let train_gifts: Vec<f64> = train_idx.iter().map(|&i| all[i]).collect();
                    Some(ProfitOptions {
                        donations: test_idx.iter().map(|&i| all[i]).collect(),
                        cost,
                        expected_gift: match args.profit.expected_gift {
                            Some(g) => g,
                            None => mean_positive_gift(train.labels(), &train_gifts)?,
                        },
                    })
                }
                _ => None,
            };
            let opts = EvalOptions {
                tie_mode: args.tie_mode.into(),
                profit,
            };
            methods
                .iter()
                .map(|&method| {
                    let cfg = TrainConfig { seed, ..base };
                    let linear = fit_linear(&train, method.loss(), &cfg, centering)
                        .with_context(|| format!("{method} on split {split}"))?;
                    let fitted = if method.is_calibrated() {
                        Fitted::Calibrated(calibrate(&linear, &train)?)
                    } else {
                        Fitted::Linear(linear)
                    };
                    Ok(evaluate(&fitted as &dyn Predictor, &test, &opts)?)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    type Column = (&'static str, fn(&EvalReport) -> Option<f64>);
    let mut columns: Vec<Column> = vec![("auc", |r| Some(r.auc)), ("mse", |r| Some(r.mse))];
    if data.true_eta().is_some() {
        columns.push(("mse_to_truth", |r| r.mse_to_truth));
    }
    if args.profit.cost.is_some() {
        columns.push(("profit", |r| r.profit));
    }

    write!(out, "{:<12}", "method")?;
    for (name, _) in &columns {
        write!(out, "{name:>26}")?;
    }
    writeln!(out)?;
    let mut machine = Vec::new();
    for (m, method) in methods.iter().enumerate() {
        write!(out, "{:<12}", method.name())?;
        for (name, get) in &columns {
            let values: Vec<f64> = reports
                .iter()
                .map(|split| get(&split[m]).expect("column present"))
                .collect();
            let (mean, sd) = mean_and_deviation(&values);
            write!(out, "{:>26}", format!("{mean:.6} ± {sd:.6}"))?;
            machine.push(format!("{}.{name}.mean={mean}", method.name()));
            machine.push(format!("{}.{name}.deviation={sd}", method.name()));
        }
        writeln!(out)?;
    }
    writeln!(out)?;
    writeln!(out, "splits={k}")?;
    writeln!(out, "tie_mode={}", tie_name(args.tie_mode.into()))?;
    for line in machine {
        writeln!(out, "{line}")?;
    }
    Ok(())
}
