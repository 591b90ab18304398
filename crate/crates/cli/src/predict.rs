use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use rankcal::calibration::{estimate_c, pu_adjust, PuEstimate};
use rankcal::evaluation::Predictor;
use rankcal::methods::Fitted;
use rankcal::sgd::LossKind;

use crate::args::PredictArgs;
use crate::input::{self, Extras};
use crate::model_file::ModelFile;

pub fn run(args: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let file = ModelFile::load(&args.model)?;
    let predictor = file.predictor()?;
    let ranker = file.linear()?;
    let scores_only = matches!(predictor, Fitted::Linear(ref m) if m.kind() == LossKind::PairwiseLogistic);
    if scores_only && !args.raw {
        bail!(
            "{} is an uncalibrated ranker and has no probabilities; run `rankcal calibrate` first or pass --raw for scores",
            args.model.display()
        );
    }
    if scores_only && (args.pu_c.is_some() || args.pu_estimate_from.is_some()) {
        bail!("positive-unlabeled adjustment needs a calibrated model");
    }

    let extras = Extras {
        model_features: file.feature_names.clone(),
        label_optional: true,
        ..Extras::default()
    };
    let data = input::fit_dimension(input::load(&args.data, &extras)?.dataset, ranker.dimension())?;

    let pu: Option<PuEstimate> = match (args.pu_c, &args.pu_estimate_from) {
        (Some(c), _) => Some(PuEstimate::new(c)?),
        (None, Some(path)) => {
            let positives =
                input::fit_dimension(input::load_path(path, &args.data, &extras)?.dataset, ranker.dimension())?;
            let probs = positives
                .rows()
                .iter()
                .map(|x| predictor.probability(x))
                .collect::<Result<Vec<_>, _>>()?;
            Some(estimate_c(&probs)?)
        }
        (None, None) => None,
    };

    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(out)),
    };
    if let Some(c) = &pu {
        eprintln!("labeling rate c={}", c.c());
    }
    for x in data.rows() {
        let score = ranker.score(x)?;
        if scores_only {
            writeln!(sink, "{score}")?;
            continue;
        }
        let mut p = predictor.probability(x)?;
        if let Some(c) = &pu {
            p = pu_adjust(p, c);
        }
        if args.raw {
            writeln!(sink, "{p},{score}")?;
        } else {
            writeln!(sink, "{p}")?;
        }
    }
    sink.flush()?;
    Ok(())
}
