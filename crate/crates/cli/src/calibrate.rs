use std::io::Write;

use anyhow::{bail, Result};
use rankcal::calibration::calibrate;
use rankcal::data::{split_indices, SplitSpec};

use crate::args::CalibrateArgs;
use crate::input::{self, Extras};
use crate::model_file::{CalibrationInfo, ModelFile};

pub fn run(args: &CalibrateArgs, out: &mut dyn Write) -> Result<()> {
    let file = ModelFile::load(&args.model)?;
    if file.is_calibrated() {
        bail!("{} is already calibrated", args.model.display());
    }
    let extras = Extras {
        model_features: file.feature_names.clone(),
        ..Extras::default()
    };
    let loaded = input::load(&args.data, &extras)?;
    let ranker = file.linear()?;
    let data = input::fit_dimension(loaded.dataset, ranker.dimension())?;

    // Held-out mode uses the rows `train --reserve-calibration` set aside
    // when given the same data; any other file is taken as held out already.
    let (rows, mode) = match (&file.training.reserve, args.paper_faithful) {
        (_, true) => (data, "all_rows"),
        (Some(reserve), false) => {
            if data.len() != reserve.total_rows {
                bail!(
                    "model reserved calibration rows from a {}-row file but --data has {} rows",
                    reserve.total_rows,
                    data.len()
                );
            }
            let spec = SplitSpec::new(1.0 - reserve.fraction, reserve.seed, true)?;
            let (_, held) = split_indices(&data, &spec)?;
            (data.subset(&held), "held_out")
        }
        (None, false) => (data, "held_out"),
    };

    let model = calibrate(&ranker, &rows)?;
    let info = CalibrationInfo {
        mode: mode.into(),
        rows: rows.len(),
    };
    file.with_map(model.map(), info)?.save(&args.out)?;
    writeln!(
        out,
        "wrote {} ({} breakpoints from {} {} rows)",
        args.out.display(),
        model.map().breakpoints().len(),
        rows.len(),
        mode
    )?;
    Ok(())
}
