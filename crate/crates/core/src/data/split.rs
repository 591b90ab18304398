use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// A seeded train/test partition request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64, stratified: bool) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "train fraction must lie strictly between 0 and 1, got {train_fraction}"
            )));
        }
        Ok(Self {
            train_fraction,
            seed,
            stratified,
        })
    }
}

/// Row indices of the train and test parts, each in ascending order.
pub fn split_indices(data: &Dataset, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    SplitSpec::new(spec.train_fraction, spec.seed, spec.stratified)?;
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("cannot split {n} rows")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut train = Vec::new();
    let mut test = Vec::new();
    if spec.stratified {
        let (n_pos, n_neg) = (data.n_pos(), data.n_neg());
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::MissingClass { n_pos, n_neg });
        }
        for class in [true, false] {
            let mut idx: Vec<usize> = (0..n).filter(|&i| data.labels()[i] == class).collect();
            idx.shuffle(&mut rng);
            let k = (idx.len() as f64 * spec.train_fraction).round() as usize;
            train.extend_from_slice(&idx[..k]);
            test.extend_from_slice(&idx[k..]);
        }
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let k = ((n as f64 * spec.train_fraction).round() as usize).clamp(1, n - 1);
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Deterministic train/test partition. Both parts keep the input row order.
pub fn split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(data, spec)?;
    Ok((data.subset(&train), data.subset(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureVector;

    fn toy(labels: &[bool]) -> Dataset {
        let rows = (0..labels.len())
            .map(|i| FeatureVector::from_dense(&[i as f64 + 1.0]).unwrap())
            .collect();
        Dataset::new(1, rows, labels.to_vec(), None).unwrap()
    }

    #[test]
    fn sizes_follow_fraction() {
        let d = toy(&[true, false].repeat(5));
        let (tr, te) = split(&d, &SplitSpec::new(0.8, 3, false).unwrap()).unwrap();
        assert_eq!((tr.len(), te.len()), (8, 2));
    }

    #[test]
    fn same_seed_same_partition() {
        let d = toy(&[true, false, false].repeat(7));
        let spec = SplitSpec::new(0.7, 11, false).unwrap();
        assert_eq!(split_indices(&d, &spec).unwrap(), split_indices(&d, &spec).unwrap());
        let other = SplitSpec { seed: 12, ..spec };
        assert_ne!(split_indices(&d, &spec).unwrap(), split_indices(&d, &other).unwrap());
    }

    #[test]
    fn stratified_balances_classes() {
        let d = toy(&[true, true, true, true, true, false, false, false, false, false]);
        let (tr, te) = split(&d, &SplitSpec::new(0.8, 5, true).unwrap()).unwrap();
        assert_eq!((tr.n_pos(), tr.n_neg()), (4, 4));
        assert_eq!((te.n_pos(), te.n_neg()), (1, 1));
    }

    #[test]
    fn partition_is_exact() {
        let d = toy(&[true, false, true, true, false, false, true]);
        let (tr, te) = split_indices(&d, &SplitSpec::new(0.6, 1, false).unwrap()).unwrap();
        let mut all: Vec<usize> = tr.iter().chain(te.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..d.len()).collect::<Vec<_>>());
    }

    #[test]
    fn errors() {
        assert!(SplitSpec::new(1.0, 0, false).is_err());
        assert!(SplitSpec::new(0.0, 0, false).is_err());
        assert!(split(&toy(&[true]), &SplitSpec::new(0.5, 0, false).unwrap()).is_err());
        let one_class = toy(&[true, true, true]);
        assert!(matches!(
            split(&one_class, &SplitSpec::new(0.5, 0, true).unwrap()),
            Err(Error::MissingClass { .. })
        ));
    }
}
