use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{Dataset, FeatureVector};
use crate::error::{Error, Result};

/// Column roles for a header CSV file.
///
/// Every column that is not the label, the truth column, or a side column
/// becomes a feature, unless `features` restricts the selection.
#[derive(Debug, Clone, Default)]
pub struct DenseOptions {
    /// Binary label column. When absent every label is read as 0, which is
    /// only meaningful for scoring unlabeled data.
    pub label: Option<String>,
    /// Column holding the true probability of each row.
    pub truth: Option<String>,
    /// Numeric columns returned separately instead of used as features
    /// (donation amounts, for instance).
    pub side: Vec<String>,
    /// Explicit feature columns, in the order they should be indexed.
    pub features: Option<Vec<String>>,
}

impl DenseOptions {
    pub fn with_label(label: impl Into<String>) -> Self {
        Self {
            label: Some(label.into()),
            ..Self::default()
        }
    }
}

/// Result of [`load_dense_with`].
#[derive(Debug, Clone)]
pub struct DenseTable {
    pub dataset: Dataset,
    pub feature_names: Vec<String>,
    pub side: HashMap<String, Vec<f64>>,
}

/// Reads a header CSV whose `label_column` holds 0/1 labels; all other
/// columns are features.
pub fn load_dense(path: impl AsRef<Path>, label_column: &str) -> Result<Dataset> {
    Ok(load_dense_with(path, &DenseOptions::with_label(label_column))?.dataset)
}

pub fn load_dense_with(path: impl AsRef<Path>, options: &DenseOptions) -> Result<DenseTable> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let parse_err = |row: usize, column: &str, message: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        column: column.to_string(),
        message,
    };

    let file = File::open(path).map_err(io_err)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(1, "<header>", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();

    let position = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(1, name, "column not found in header".into()))
    };

    let label_col = options.label.as_deref().map(position).transpose()?;
    let truth_col = options.truth.as_deref().map(position).transpose()?;
    let side_cols = options
        .side
        .iter()
        .map(|name| position(name).map(|p| (name.clone(), p)))
        .collect::<Result<Vec<_>>>()?;

    let feature_cols: Vec<usize> = match &options.features {
        Some(names) => names.iter().map(|n| position(n)).collect::<Result<_>>()?,
        None => (0..headers.len())
            .filter(|c| Some(*c) != label_col && Some(*c) != truth_col && !side_cols.iter().any(|(_, p)| p == c))
            .collect(),
    };
    if feature_cols.is_empty() {
        return Err(parse_err(1, "<header>", "no feature columns".into()));
    }
    let dimension = feature_cols.len();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut truth = truth_col.map(|_| Vec::new());
    let mut side: HashMap<String, Vec<f64>> = side_cols.iter().map(|(n, _)| (n.clone(), Vec::new())).collect();

    for (record_idx, record) in reader.records().enumerate() {
        // header is line 1
        let line = record_idx + 2;
        let record = record.map_err(|e| parse_err(line, "<record>", e.to_string()))?;
        let field = |col: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            let value: f64 = raw
                .parse()
                .map_err(|_| parse_err(line, &headers[col], format!("cannot parse {raw:?} as a number")))?;
            if !value.is_finite() {
                return Err(parse_err(line, &headers[col], format!("non-finite value {raw:?}")));
            }
            Ok(value)
        };

        let label = match label_col {
            Some(col) => match field(col)? {
                0.0 => false,
                1.0 => true,
                v => return Err(parse_err(line, &headers[col], format!("label must be 0 or 1, got {v}"))),
            },
            None => false,
        };
        if let (Some(col), Some(values)) = (truth_col, truth.as_mut()) {
            let p = field(col)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(parse_err(
                    line,
                    &headers[col],
                    format!("probability {p} outside [0, 1]"),
                ));
            }
            values.push(p);
        }
        for (name, col) in &side_cols {
            let v = field(*col)?;
            side.get_mut(name).expect("side column registered").push(v);
        }
        let mut entries = Vec::new();
        for (index, &col) in feature_cols.iter().enumerate() {
            let v = field(col)?;
            if v != 0.0 {
                entries.push((index, v));
            }
        }
        rows.push(FeatureVector::new(dimension, entries)?);
        labels.push(label);
    }

    let feature_names = feature_cols.iter().map(|&c| headers[c].clone()).collect();
    Ok(DenseTable {
        dataset: Dataset::new(dimension, rows, labels, truth)?,
        feature_names,
        side,
    })
}

/// Reads the whitespace-separated `<label> <index>:<value> ...` format with
/// 1-based indices. Labels are `0`/`1`, with `-1` accepted for `0`.
pub fn load_sparse(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_sparse(BufReader::new(file), path)
}

/// Reader form of [`load_sparse`]; `source` only labels error messages.
/// The dimension is one past the largest index seen (at least 1).
pub fn read_sparse<R: BufRead>(reader: R, source: impl AsRef<Path>) -> Result<Dataset> {
    let source: PathBuf = source.as_ref().to_path_buf();
    let parse_err = |row: usize, column: String, message: String| Error::Parse {
        path: source.clone(),
        row,
        column,
        message,
    };

    let mut raw_rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut max_index: Option<usize> = None;

    for (line_idx, line) in reader.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = line.map_err(|e| Error::Io {
            path: source.clone(),
            source: e,
        })?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_token = tokens.next().expect("non-empty line has a token");
        let label = match label_token {
            "1" | "+1" => true,
            "0" | "-1" => false,
            other => {
                return Err(parse_err(
                    line_no,
                    "label".into(),
                    format!("label must be 0, 1 or -1, got {other:?}"),
                ))
            }
        };

        let mut entries: Vec<(usize, f64)> = Vec::new();
        for token in tokens {
            let (idx, val) = token
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, token.into(), "expected <index>:<value>".into()))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_err(line_no, token.into(), format!("bad index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err(line_no, token.into(), "indices are 1-based".into()));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| parse_err(line_no, token.into(), format!("bad value {val:?}")))?;
            if !val.is_finite() {
                return Err(parse_err(line_no, token.into(), "non-finite value".into()));
            }
            entries.push((idx - 1, val));
        }
        entries.sort_by_key(|&(i, _)| i);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(parse_err(line_no, format!("{}", w[0].0 + 1), "duplicate index".into()));
        }
        entries.retain(|&(_, v)| v != 0.0);
        if let Some(&(last, _)) = entries.last() {
            max_index = Some(max_index.map_or(last, |m| m.max(last)));
        }
        raw_rows.push(entries);
        labels.push(label);
    }

    let dimension = max_index.map_or(1, |m| m + 1);
    let rows = raw_rows
        .into_iter()
        .map(|entries| FeatureVector::new(dimension, entries))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(dimension, rows, labels, None)
}

/// Writes `data` in the sparse line format. Values use the shortest decimal
/// form that parses back to the same `f64`.
pub fn write_sparse<W: Write>(mut writer: W, data: &Dataset) -> std::io::Result<()> {
    for (row, label) in data.iter() {
        write!(writer, "{}", u8::from(label))?;
        for &(i, v) in row.entries() {
            write!(writer, " {}:{}", i + 1, v)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
