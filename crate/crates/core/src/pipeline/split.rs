//! Seeded train/test splits and stratified folds.
//!
//! Shuffles use MT19937 and the same bounded-integer draw as NumPy's legacy
//! `RandomState.permutation`, so a seed produces the same index order as
//! `numpy.random.RandomState(seed).permutation(n)`.

use rand_mt::Mt;

use crate::error::{Error, Result};
use crate::pipeline::Dataset;

/// Uniform integer in `[0, max]` by masked rejection sampling.
fn bounded(rng: &mut Mt, max: u64) -> u64 {
    if max == 0 {
        return 0;
    }
    let mut mask = max;
    for shift in [1, 2, 4, 8, 16, 32] {
        mask |= mask >> shift;
    }
    if max <= u64::from(u32::MAX) {
        loop {
            let v = u64::from(rng.next_u32()) & mask;
            if v <= max {
                return v;
            }
        }
    }
    loop {
        let hi = u64::from(rng.next_u32());
        let v = ((hi << 32) | u64::from(rng.next_u32())) & mask;
        if v <= max {
            return v;
        }
    }
}

fn shuffle_in_place<T>(items: &mut [T], rng: &mut Mt) {
    for i in (1..items.len()).rev() {
        let j = bounded(rng, i as u64) as usize;
        items.swap(i, j);
    }
}

/// Permutation of `0..n` drawn from MT19937 seeded with `seed`.
pub fn numpy_permutation(n: usize, seed: u32) -> Vec<usize> {
    let mut rng = Mt::new(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    shuffle_in_place(&mut idx, &mut rng);
    idx
}

/// Shuffle, then take the first `ceil(test_fraction * n)` rows as the test
/// set and the rest as the training set. Both keep the shuffled order.
pub fn train_test_split(ds: &Dataset, test_fraction: f64, seed: u32) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    for (class, &count) in ds.class_counts().iter().enumerate() {
        if count < 2 {
            return Err(Error::ClassTooSmall {
                class,
                count,
                required: 2,
            });
        }
    }
    let n = ds.len();
    let n_test = (test_fraction * n as f64).ceil() as usize;
    if n_test == 0 || n_test >= n {
        return Err(Error::InvalidParameter(format!(
            "test fraction {test_fraction} leaves no training or test rows for {n} rows"
        )));
    }
    let perm = numpy_permutation(n, seed);
    let (test, train) = perm.split_at(n_test);
    Ok((ds.select(train), ds.select(test)))
}

/// Keep at most `cap` rows of each class, taking them in the current row
/// order.
pub fn cap_per_class(ds: &Dataset, cap: usize) -> Dataset {
    let mut seen = vec![0usize; ds.n_classes()];
    let keep: Vec<usize> = ds
        .y()
        .iter()
        .enumerate()
        .filter_map(|(i, &l)| {
            seen[l] += 1;
            (seen[l] <= cap).then_some(i)
        })
        .collect();
    ds.select(&keep)
}

/// One cross-validation split, as sorted row indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Stratified k-fold split. Each class is shuffled and dealt round-robin
/// over the folds, continuing the rotation from where the previous class
/// stopped so fold sizes stay within one of each other.
pub fn stratified_kfold(ds: &Dataset, folds: usize, seed: u32) -> Result<Vec<Fold>> {
    if folds < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let counts = ds.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < folds {
            return Err(Error::ClassTooSmall {
                class,
                count,
                required: folds,
            });
        }
    }
    let mut rng = Mt::new(seed);
    let mut assignment = vec![0usize; ds.len()];
    let mut next = 0usize;
    for class in 0..ds.n_classes() {
        let mut members: Vec<usize> = ds
            .y()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        shuffle_in_place(&mut members, &mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok((0..folds)
        .map(|f| {
            let (validation, train): (Vec<usize>, Vec<usize>) =
                (0..ds.len()).partition(|&i| assignment[i] == f);
            Fold { train, validation }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(labels: &[usize]) -> Dataset {
        let x = labels.iter().map(|&l| vec![l as f64, 1.0]).collect();
        Dataset::unnamed(x, labels.to_vec(), 2).unwrap()
    }

    #[test]
    fn permutation_matches_numpy_legacy() {
        // numpy.random.RandomState(90).permutation(10)
        assert_eq!(
            numpy_permutation(10, 90),
            vec![8, 1, 0, 6, 5, 9, 4, 7, 3, 2]
        );
        // numpy.random.RandomState(0).permutation(20)
        assert_eq!(
            numpy_permutation(20, 0),
            vec![18, 1, 19, 8, 10, 17, 6, 13, 4, 2, 5, 14, 9, 7, 16, 11, 3, 0, 15, 12]
        );
    }

    #[test]
    fn mt_stream_matches_reference() {
        let mut rng = Mt::new(5489);
        assert_eq!(
            [rng.next_u32(), rng.next_u32(), rng.next_u32()],
            [3_499_211_612, 581_869_302, 3_890_346_734]
        );
    }

    #[test]
    fn split_takes_test_rows_from_the_front() {
        // sklearn train_test_split(arange(150), test_size=0.2, random_state=90)
        let labels: Vec<usize> = (0..150).map(|i| i / 75).collect();
        let x = (0..150).map(|i| vec![i as f64, 0.0]).collect();
        let ds = Dataset::unnamed(x, labels, 2).unwrap();
        let (train, test) = train_test_split(&ds, 0.2, 90).unwrap();
        assert_eq!(test.len(), 30);
        assert_eq!(train.len(), 120);
        let head: Vec<usize> = test.x()[..5].iter().map(|r| r[0] as usize).collect();
        assert_eq!(head, vec![90, 16, 15, 111, 136]);
        let head: Vec<usize> = train.x()[..5].iter().map(|r| r[0] as usize).collect();
        assert_eq!(head, vec![29, 21, 138, 125, 23]);
    }

    #[test]
    fn split_is_deterministic_and_rounds_up() {
        let ds = toy(&[0, 0, 0, 1, 1, 1, 0, 1]);
        let a = train_test_split(&ds, 0.01, 3).unwrap();
        let b = train_test_split(&ds, 0.01, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.len(), 1);
    }

    #[test]
    fn split_rejects_tiny_classes() {
        let ds = toy(&[0, 0, 0, 1]);
        assert!(matches!(
            train_test_split(&ds, 0.5, 0),
            Err(Error::ClassTooSmall { class: 1, .. })
        ));
    }

    #[test]
    fn cap_keeps_first_rows_per_class() {
        let ds = toy(&[1, 0, 1, 1, 0, 0, 1]);
        let capped = cap_per_class(&ds, 2);
        assert_eq!(capped.y(), &[1, 0, 1, 0]);
    }

    #[test]
    fn kfold_balanced_classes() {
        let ds = toy(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let folds = stratified_kfold(&ds, 5, 1).unwrap();
        assert_eq!(folds.len(), 5);
        for f in &folds {
            let labels: Vec<usize> = f.validation.iter().map(|&i| ds.y()[i]).collect();
            assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 1);
            assert_eq!(labels.iter().filter(|&&l| l == 1).count(), 1);
            assert_eq!(f.train.len(), 8);
        }
    }

    #[test]
    fn kfold_partitions_indices() {
        let labels: Vec<usize> = (0..37).map(|i| usize::from(i % 3 == 0)).collect();
        let ds = toy(&labels);
        let folds = stratified_kfold(&ds, 4, 9).unwrap();
        let mut all: Vec<usize> = folds.iter().flat_map(|f| f.validation.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
        for f in &folds {
            assert_eq!(f.train.len() + f.validation.len(), 37);
            assert!(f.train.iter().all(|i| !f.validation.contains(i)));
        }
        assert_eq!(folds, stratified_kfold(&ds, 4, 9).unwrap());
    }

    #[test]
    fn kfold_rejects_small_class() {
        let ds = toy(&[0, 0, 0, 0, 0, 1, 1]);
        assert!(matches!(
            stratified_kfold(&ds, 3, 0),
            Err(Error::ClassTooSmall { class: 1, .. })
        ));
        assert!(stratified_kfold(&ds, 1, 0).is_err());
    }
}
