use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use rankcal::methods::Method;
use rankcal::sgd::TrainConfig;
use rankcal::synthetic::{sweep, SweepConfig};

use crate::args::SynthArgs;

pub fn run(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(a) = args.a_values.iter().find(|a| !(0.0..=0.5).contains(*a)) {
        bail!("noise level a={a} outside [0, 0.5]");
    }
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<Method>())
        .collect::<Result<Vec<_>, _>>()?;
    let config = SweepConfig {
        a_values: args.a_values.clone(),
        n: args.n,
        trials: args.trials,
        methods,
        seed: args.seed,
        train: TrainConfig {
            lambda: args.lambda,
            steps: args.steps,
            eta0: args.eta0,
            seed: args.seed,
            crr_alpha: args.crr_alpha,
        },
        ..SweepConfig::default()
    };
    let rows = sweep(&config)?;

    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(out)),
    };
    writeln!(sink, "a,method,mean,deviation")?;
    for r in rows {
        writeln!(sink, "{},{},{},{}", r.a, r.method, r.mean, r.deviation)?;
    }
    sink.flush()?;
    Ok(())
}
