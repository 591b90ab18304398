//! The `rankcal` command line: train, calibrate, predict, eval and synth.

pub mod args;
mod calibrate;
mod eval;
pub mod input;
pub mod model_file;
mod predict;
mod synth;
pub mod train;

use std::io::Write;

use anyhow::Result;

pub use args::{Cli, Command};

/// Runs one parsed invocation, writing normal output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Train(a) => train::run(a, out),
        Command::Calibrate(a) => calibrate::run(a, out),
        Command::Predict(a) => predict::run(a, out),
        Command::Eval(a) => eval::run(a, out),
        Command::Synth(a) => synth::run(a, out),
    }
}
