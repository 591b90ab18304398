use std::io::Write;

use proptest::prelude::*;
use rankcal::data::{
    load_dense, load_dense_with, load_sparse, read_sparse, split, split_indices, standardize, write_sparse, Dataset,
    DenseOptions, FeatureVector, SplitSpec,
};

fn sparse_dataset() -> impl Strategy<Value = Dataset> {
    (1usize..30, 1usize..40).prop_flat_map(|(dim, n)| {
        let row = prop::collection::btree_map(0..dim, -1e6f64..1e6, 0..dim.min(8))
            .prop_map(move |m| FeatureVector::new(dim, m.into_iter().collect()).unwrap());
        (prop::collection::vec(row, n), prop::collection::vec(any::<bool>(), n))
            .prop_map(move |(rows, labels)| Dataset::new(dim, rows, labels, None).unwrap())
    })
}

proptest! {
    #[test]
    fn sparse_format_round_trips(data in sparse_dataset()) {
        let mut buf = Vec::new();
        write_sparse(&mut buf, &data).unwrap();
        let back = read_sparse(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back.labels(), data.labels());
        prop_assert!(back.dimension() <= data.dimension());
        let back = back.with_dimension(data.dimension()).unwrap();
        prop_assert_eq!(back.rows(), data.rows());
    }

    #[test]
    fn split_is_a_partition(data in sparse_dataset(), seed in any::<u64>(), fraction in 0.05f64..0.95) {
        prop_assume!(data.len() >= 2);
        let spec = SplitSpec::new(fraction, seed, false).unwrap();
        let (train, test) = split_indices(&data, &spec).unwrap();
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..data.len()).collect::<Vec<_>>());
        prop_assert!(!train.is_empty() && !test.is_empty());
        prop_assert_eq!(split_indices(&data, &spec).unwrap(), (train, test));
    }

    #[test]
    fn standardizing_twice_changes_nothing(data in sparse_dataset()) {
        let (once, _, _) = standardize(&data, &[]).unwrap();
        let (twice, _, _) = standardize(&once, &[]).unwrap();
        for (a, b) in once.rows().iter().zip(twice.rows()) {
            for (x, y) in a.to_dense().iter().zip(b.to_dense()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "{} vs {}", x, y);
            }
        }
    }
}

#[test]
fn stratified_split_keeps_class_shares() {
    let rows = (0..10)
        .map(|i| FeatureVector::from_dense(&[i as f64]).unwrap())
        .collect();
    let labels = (0..10).map(|i| i % 2 == 0).collect();
    let data = Dataset::new(1, rows, labels, None).unwrap();
    let (train, test) = split(&data, &SplitSpec::new(0.8, 3, true).unwrap()).unwrap();
    assert_eq!((train.n_pos(), train.n_neg()), (4, 4));
    assert_eq!(test.len(), 2);
    let (plain, _) = split(&data, &SplitSpec::new(0.8, 3, false).unwrap()).unwrap();
    assert_eq!(plain.len(), 8);
}

#[test]
fn standardize_uses_training_statistics() {
    let row = |v: f64| FeatureVector::from_dense(&[v, 2.0]).unwrap();
    let train = Dataset::new(2, vec![row(1.0), row(3.0)], vec![true, false], None).unwrap();
    let test = Dataset::new(2, vec![row(5.0)], vec![true], None).unwrap();
    let (t, others, _) = standardize(&train, &[&test]).unwrap();
    assert_eq!(t.rows()[0].to_dense(), vec![-1.0, 2.0]);
    assert_eq!(t.rows()[1].to_dense(), vec![1.0, 2.0]);
    assert_eq!(others[0].rows()[0].to_dense(), vec![3.0, 2.0]);
}

#[test]
fn loads_files_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = dir.path().join("a.svm");
    std::fs::write(&sparse, "1 3:0.5 7:1.0\n-1 1:2.0\n# comment\n").unwrap();
    let data = load_sparse(&sparse).unwrap();
    assert_eq!(data.rows()[0].entries(), &[(2, 0.5), (6, 1.0)]);
    assert_eq!(data.labels(), &[true, false]);
    assert_eq!(data.dimension(), 7);

    let dup = dir.path().join("dup.svm");
    std::fs::write(&dup, "1 3:0.5 3:0.7\n").unwrap();
    assert!(load_sparse(&dup).is_err());

    let dense = dir.path().join("a.csv");
    let mut f = std::fs::File::create(&dense).unwrap();
    writeln!(f, "x1,y,x2,gift").unwrap();
    writeln!(f, "0.5,1,0,20").unwrap();
    writeln!(f, "1.5,0,2,0").unwrap();
    drop(f);
    let plain = load_dense(&dense, "y").unwrap();
    assert_eq!(plain.dimension(), 3);
    let opts = DenseOptions {
        side: vec!["gift".into()],
        ..DenseOptions::with_label("y")
    };
    let table = load_dense_with(&dense, &opts).unwrap();
    assert_eq!(table.feature_names, vec!["x1", "x2"]);
    assert_eq!(table.side["gift"], vec![20.0, 0.0]);
    assert_eq!(table.dataset.rows()[1].to_dense(), vec![1.5, 2.0]);
    assert!(load_dense(&dense, "missing").is_err());
}
