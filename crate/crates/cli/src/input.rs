use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rankcal::data::{load_dense_with, load_sparse, Dataset, DenseOptions};

use crate::args::{DataArgs, Format};

/// A loaded dataset plus the CSV-only extras.
#[derive(Debug, Clone)]
pub struct Input {
    pub dataset: Dataset,
    pub feature_names: Option<Vec<String>>,
    pub side: HashMap<String, Vec<f64>>,
    pub format: Format,
}

#[derive(Debug, Clone, Default)]
pub struct Extras {
    pub truth: Option<String>,
    pub side: Vec<String>,
    /// Feature columns fixed by a model file; overrides `--features`.
    pub model_features: Option<Vec<String>>,
    pub label_optional: bool,
}

pub fn detect_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| {
        let csv = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if csv {
            Format::Csv
        } else {
            Format::Sparse
        }
    })
}

pub fn load(args: &DataArgs, extras: &Extras) -> Result<Input> {
    load_path(&args.data, args, extras)
}

/// Loads `path` with the column roles given in `args`.
pub fn load_path(path: &Path, args: &DataArgs, extras: &Extras) -> Result<Input> {
    let format = detect_format(path, args.format);
    match format {
        Format::Csv => {
            if args.label.is_none() && !extras.label_optional {
                bail!("--label is required for CSV input");
            }
            let options = DenseOptions {
                label: args.label.clone(),
                truth: extras.truth.clone(),
                side: extras.side.clone(),
                features: extras.model_features.clone().or_else(|| args.features.clone()),
            };
            let table = load_dense_with(path, &options).with_context(|| format!("cannot load {}", path.display()))?;
            Ok(Input {
                dataset: table.dataset,
                feature_names: Some(table.feature_names),
                side: table.side,
                format,
            })
        }
        Format::Sparse => {
            if args.features.is_some() || extras.truth.is_some() || !extras.side.is_empty() {
                bail!("column options (--features, truth, donation) need CSV input");
            }
            let dataset = load_sparse(path).with_context(|| format!("cannot load {}", path.display()))?;
            Ok(Input {
                dataset,
                feature_names: None,
                side: HashMap::new(),
                format,
            })
        }
    }
}

/// Widens sparse data to the model dimension; rejects wider data.
pub fn fit_dimension(data: Dataset, dimension: usize) -> Result<Dataset> {
    if data.dimension() > dimension {
        bail!(
            "data has {} features but the model expects {}",
            data.dimension(),
            dimension
        );
    }
    Ok(data.with_dimension(dimension)?)
}
