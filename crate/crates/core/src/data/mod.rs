//! Sparse feature vectors, labeled datasets, and the loaders, splitters and
//! scalers that feed the learners.
//!
//! Every dataset is stored sparse: zero entries are omitted and the
//! dimension is carried explicitly. Dense CSV input is converted on load.

mod io;
mod split;
mod standardize;

pub use io::{load_dense, load_dense_with, load_sparse, read_sparse, write_sparse, DenseOptions, DenseTable};
pub use split::{split, split_indices, SplitSpec};
pub use standardize::{standardize, Centering, Scaling};

use crate::error::{Error, Result};

/// A sparse feature vector: `(index, value)` pairs with strictly increasing
/// indices below `dimension` and finite, non-zero values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    entries: Vec<(usize, f64)>,
    dimension: usize,
}

impl FeatureVector {
    pub fn new(dimension: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidFeature("dimension must be positive".into()));
        }
        let mut prev: Option<usize> = None;
        for &(index, value) in &entries {
            if index >= dimension {
                return Err(Error::InvalidFeature(format!(
                    "index {index} out of range for dimension {dimension}"
                )));
            }
            if prev.is_some_and(|p| index <= p) {
                return Err(Error::InvalidFeature(format!(
                    "indices must be strictly increasing (saw {index} after {})",
                    prev.unwrap()
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidFeature(format!("non-finite value at index {index}")));
            }
            if value == 0.0 {
                return Err(Error::InvalidFeature(format!("explicit zero at index {index}")));
            }
            prev = Some(index);
        }
        Ok(Self { entries, dimension })
    }

    /// Builds a vector from dense values, dropping zeros.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        Self::new(values.len(), entries)
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Value at `index`, zero when the entry is omitted.
    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    /// Inner product with a dense weight vector of at least `dimension` entries.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| weights[i] * v).sum()
    }

    /// Reinterprets the vector in a space of `dimension` features.
    /// Fails if an existing entry would fall outside the new space.
    pub fn with_dimension(&self, dimension: usize) -> Result<Self> {
        if let Some(&(last, _)) = self.entries.last() {
            if last >= dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    actual: last + 1,
                });
            }
        }
        Self::new(dimension, self.entries.clone())
    }
}

/// Labeled examples sharing one feature dimension. `true_eta`, when present,
/// holds the generating probability `Pr[y = 1 | x]` of each row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<FeatureVector>,
    labels: Vec<bool>,
    true_eta: Option<Vec<f64>>,
    dimension: usize,
}

impl Dataset {
    pub fn new(
        dimension: usize,
        rows: Vec<FeatureVector>,
        labels: Vec<bool>,
        true_eta: Option<Vec<f64>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dataset dimension must be positive".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: labels.len(),
            });
        }
        if let Some(eta) = &true_eta {
            if eta.len() != rows.len() {
                return Err(Error::LengthMismatch {
                    left: rows.len(),
                    right: eta.len(),
                });
            }
            if let Some(bad) = eta.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidArgument(format!("true probability {bad} outside [0, 1]")));
            }
        }
        if let Some(row) = rows.iter().find(|r| r.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: row.dimension(),
            });
        }
        Ok(Self {
            rows,
            labels,
            true_eta,
            dimension,
        })
    }

    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn true_eta(&self) -> Option<&[f64]> {
        self.true_eta.as_deref()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.labels.iter().filter(|&&y| y).count()
    }

    pub fn n_neg(&self) -> usize {
        self.len() - self.n_pos()
    }

    /// Empirical fraction of positives; `None` for an empty dataset.
    pub fn base_rate(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.n_pos() as f64 / self.len() as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeatureVector, bool)> {
        self.rows.iter().zip(self.labels.iter().copied())
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            true_eta: self
                .true_eta
                .as_ref()
                .map(|eta| indices.iter().map(|&i| eta[i]).collect()),
            dimension: self.dimension,
        }
    }

    /// Same rows viewed in a wider (or equal) feature space. Sparse files only
    /// reveal the largest index present, so test files are often narrower than
    /// the model that scores them.
    pub fn with_dimension(&self, dimension: usize) -> Result<Dataset> {
        if dimension == self.dimension {
            return Ok(self.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.with_dimension(dimension))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(dimension, rows, self.labels.clone(), self.true_eta.clone())
    }

    /// Replaces the labels, keeping rows and true probabilities.
    pub fn with_labels(&self, labels: Vec<bool>) -> Result<Dataset> {
        Dataset::new(self.dimension, self.rows.clone(), labels, self.true_eta.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_vector_rejects_bad_entries() {
        assert!(FeatureVector::new(3, vec![(0, 1.0), (2, 2.0)]).is_ok());
        assert!(FeatureVector::new(3, vec![(2, 1.0), (1, 2.0)]).is_err());
        assert!(FeatureVector::new(3, vec![(1, 1.0), (1, 2.0)]).is_err());
        assert!(FeatureVector::new(3, vec![(3, 1.0)]).is_err());
        assert!(FeatureVector::new(3, vec![(0, 0.0)]).is_err());
        assert!(FeatureVector::new(3, vec![(0, f64::NAN)]).is_err());
        assert!(FeatureVector::new(0, vec![]).is_err());
    }

    #[test]
    fn dense_conversion_drops_zeros() {
        let x = FeatureVector::from_dense(&[0.0, 2.5, 0.0, -1.0]).unwrap();
        assert_eq!(x.entries(), &[(1, 2.5), (3, -1.0)]);
        assert_eq!(x.to_dense(), vec![0.0, 2.5, 0.0, -1.0]);
        assert_eq!(x.get(3), -1.0);
        assert_eq!(x.get(0), 0.0);
        assert_eq!(x.dot(&[1.0, 2.0, 3.0, 4.0]), 1.0);
    }

    #[test]
    fn dataset_counts_and_validation() {
        let rows = vec![
            FeatureVector::from_dense(&[1.0, 0.0]).unwrap(),
            FeatureVector::from_dense(&[0.0, 1.0]).unwrap(),
            FeatureVector::from_dense(&[1.0, 1.0]).unwrap(),
        ];
        let d = Dataset::new(2, rows.clone(), vec![false, true, true], None).unwrap();
        assert_eq!((d.len(), d.n_pos(), d.n_neg()), (3, 2, 1));
        assert_eq!(d.base_rate(), Some(2.0 / 3.0));

        assert!(Dataset::new(2, rows.clone(), vec![true], None).is_err());
        assert!(Dataset::new(3, rows.clone(), vec![true; 3], None).is_err());
        assert!(Dataset::new(2, rows, vec![true; 3], Some(vec![0.5, 1.2, 0.0])).is_err());
    }

    #[test]
    fn widening_keeps_entries() {
        let x = FeatureVector::new(2, vec![(1, 3.0)]).unwrap();
        assert_eq!(x.with_dimension(5).unwrap().entries(), &[(1, 3.0)]);
        assert!(x.with_dimension(1).is_err());
    }
}
