use super::{Dataset, FeatureVector};
use crate::error::{Error, Result};

/// Whether standardization subtracts the per-feature mean.
///
/// Centering turns omitted zeros into non-zero entries, so for very sparse
/// data `ScaleOnly` keeps the representation sparse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centering {
    #[default]
    Center,
    ScaleOnly,
}

/// Per-feature affine transform `x -> (x - mean) / scale` fit on a training set.
/// Zero-variance features get `mean = 0, scale = 1` and pass through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Scaling {
    /// Population mean and standard deviation of each feature, counting
    /// omitted entries as zeros.
    pub fn fit(train: &Dataset, centering: Centering) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Empty("standardization needs training rows"));
        }
        let dim = train.dimension();
        let n = train.len() as f64;

        let mut sum = vec![0.0; dim];
        for row in train.rows() {
            for &(i, v) in row.entries() {
                sum[i] += v;
            }
        }
        let raw_mean: Vec<f64> = sum.iter().map(|s| s / n).collect();

        // Two-pass variance; omitted entries contribute (0 - mean)^2 each.
        let mut sq = vec![0.0; dim];
        let mut nnz = vec![0usize; dim];
        for row in train.rows() {
            for &(i, v) in row.entries() {
                sq[i] += (v - raw_mean[i]).powi(2);
                nnz[i] += 1;
            }
        }
        let mut mean = vec![0.0; dim];
        let mut scale = vec![1.0; dim];
        for j in 0..dim {
            let zeros = train.len() - nnz[j];
            let var = (sq[j] + zeros as f64 * raw_mean[j] * raw_mean[j]) / n;
            let sd = var.sqrt();
            if sd > 1e-12 * (1.0 + raw_mean[j].abs()) {
                scale[j] = sd;
                if centering == Centering::Center {
                    mean[j] = raw_mean[j];
                }
            }
        }
        Ok(Self { mean, scale })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn dimension(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &FeatureVector) -> Result<FeatureVector> {
        if x.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.dimension(),
            });
        }
        let mut entries = Vec::with_capacity(x.nnz());
        let mut sparse = x.entries().iter().peekable();
        for j in 0..self.dimension() {
            let v = match sparse.peek() {
                Some(&&(i, v)) if i == j => {
                    sparse.next();
                    v
                }
                _ if self.mean[j] == 0.0 => continue,
                _ => 0.0,
            };
            let t = (v - self.mean[j]) / self.scale[j];
            if t != 0.0 {
                entries.push((j, t));
            }
        }
        FeatureVector::new(x.dimension(), entries)
    }

    pub fn apply_dataset(&self, data: &Dataset) -> Result<Dataset> {
        let rows = data.rows().iter().map(|r| self.apply(r)).collect::<Result<Vec<_>>>()?;
        Dataset::new(
            data.dimension(),
            rows,
            data.labels().to_vec(),
            data.true_eta().map(<[f64]>::to_vec),
        )
    }
}

/// Fits a centered [`Scaling`] on `train` and applies it to `train` and to
/// every dataset in `others`.
pub fn standardize(train: &Dataset, others: &[&Dataset]) -> Result<(Dataset, Vec<Dataset>, Scaling)> {
    let scaling = Scaling::fit(train, Centering::Center)?;
    let train_out = scaling.apply_dataset(train)?;
    let others_out = others
        .iter()
        .map(|d| scaling.apply_dataset(d))
        .collect::<Result<Vec<_>>>()?;
    Ok((train_out, others_out, scaling))
}
