use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rankcal::data::{Dataset, FeatureVector};
use rankcal::evaluation::{auc, TieMode};
use rankcal::methods::Method;
use rankcal::sgd::{step_size, train, LossKind, TrainConfig};

const KINDS: [LossKind; 4] = [
    LossKind::Logistic,
    LossKind::Squared,
    LossKind::PairwiseLogistic,
    LossKind::Crr,
];

fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

fn dataset(rows: &[Vec<f64>], labels: Vec<bool>) -> Dataset {
    let d = rows[0].len();
    let rows = rows.iter().map(|r| FeatureVector::from_dense(r).unwrap()).collect();
    Dataset::new(d, rows, labels, None).unwrap()
}

fn noisy_data(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = gaussian_rows(&mut rng, 300, 3);
    let labels = rows
        .iter()
        .map(|r| rng.random_bool(if r[0] + 0.5 * r[1] > 0.0 { 0.85 } else { 0.15 }))
        .collect();
    dataset(&rows, labels)
}

fn scores(model: &rankcal::sgd::LinearModel, data: &Dataset) -> Vec<f64> {
    data.rows().iter().map(|x| model.score(x).unwrap()).collect()
}

#[test]
fn linearly_rankable_data_is_ranked() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w_star = [0.7, -1.3, 0.4];
    let rows = gaussian_rows(&mut rng, 200, 3);
    let labels = rows
        .iter()
        .map(|r| r.iter().zip(&w_star).map(|(a, b)| a * b).sum::<f64>() >= 0.0)
        .collect();
    let data = dataset(&rows, labels);
    let model = train(&data, LossKind::PairwiseLogistic, &TrainConfig::default()).unwrap();
    assert!(auc(&scores(&model, &data), data.labels(), TieMode::Half).unwrap() >= 0.95);
}

#[test]
fn same_seed_same_model() {
    let data = noisy_data(2);
    for kind in KINDS {
        let cfg = TrainConfig {
            steps: 5_000,
            seed: 9,
            ..TrainConfig::default()
        };
        assert_eq!(train(&data, kind, &cfg).unwrap(), train(&data, kind, &cfg).unwrap());
        let other = TrainConfig { seed: 10, ..cfg };
        assert_ne!(train(&data, kind, &cfg).unwrap(), train(&data, kind, &other).unwrap());
    }
}

#[test]
fn single_step_is_reproducible() {
    let data = noisy_data(3);
    let cfg = TrainConfig {
        steps: 1,
        seed: 4,
        ..TrainConfig::default()
    };
    for kind in KINDS {
        let a = train(&data, kind, &cfg).unwrap();
        assert_eq!(a, train(&data, kind, &cfg).unwrap());
    }
    assert!(train(&data, LossKind::Logistic, &TrainConfig { steps: 0, ..cfg }).is_err());
}

#[test]
fn all_positive_labels_push_bias_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows = gaussian_rows(&mut rng, 50, 2);
    let data = dataset(&rows, vec![true; 50]);
    let mut previous = f64::NEG_INFINITY;
    for steps in 1..200 {
        let cfg = TrainConfig {
            steps,
            lambda: 0.0,
            seed: 6,
            ..TrainConfig::default()
        };
        let bias = train(&data, LossKind::Logistic, &cfg).unwrap().bias();
        assert!(bias > previous);
        previous = bias;
    }
    assert!(train(&data, LossKind::PairwiseLogistic, &TrainConfig::default()).is_err());
}

#[test]
fn stronger_regularization_gives_smaller_weights() {
    let data = noisy_data(7);
    for kind in KINDS {
        let norms: Vec<f64> = [0.01, 0.1, 1.0, 10.0]
            .iter()
            .map(|&lambda| {
                let total: f64 = (0..5)
                    .map(|seed| {
                        let cfg = TrainConfig {
                            lambda,
                            steps: 50_000,
                            eta0: 0.1,
                            seed,
                            ..TrainConfig::default()
                        };
                        train(&data, kind, &cfg).unwrap().norm()
                    })
                    .sum();
                total / 5.0
            })
            .collect();
        for pair in norms.windows(2) {
            assert!(pair[0] > pair[1], "{kind:?}: {norms:?}");
        }
    }
}

#[test]
fn pairwise_ranker_ignores_feature_translation() {
    let data = noisy_data(8);
    let shift = [3.0, -2.0, 0.5];
    let moved_rows: Vec<Vec<f64>> = data
        .rows()
        .iter()
        .map(|x| x.to_dense().iter().zip(shift).map(|(v, s)| v + s).collect())
        .collect();
    let moved = dataset(&moved_rows, data.labels().to_vec());
    let cfg = TrainConfig {
        steps: 10_000,
        seed: 1,
        ..TrainConfig::default()
    };
    let a = train(&data, LossKind::PairwiseLogistic, &cfg).unwrap();
    let b = train(&moved, LossKind::PairwiseLogistic, &cfg).unwrap();
    for (wa, wb) in a.weights().iter().zip(b.weights()) {
        assert!((wa - wb).abs() < 1e-9, "{:?} vs {:?}", a.weights(), b.weights());
    }
}

#[test]
fn step_size_schedule() {
    assert_eq!(step_size(0.5, 0.0, 0), 0.5);
    assert_eq!(step_size(0.5, 0.0, 3), 0.25);
    assert_eq!(step_size(1.0, 0.1, 10), 0.5);
}

#[test]
fn every_method_fits_and_predicts_probabilities() {
    let data = noisy_data(9);
    let cfg = TrainConfig {
        steps: 5_000,
        ..TrainConfig::default()
    };
    for method in Method::ALL {
        let fitted = method.fit(&data, &cfg).unwrap();
        for x in data.rows() {
            let p = rankcal::evaluation::Predictor::probability(&fitted, x).unwrap();
            assert!((0.0..=1.0).contains(&p), "{method}: {p}");
        }
    }
}
