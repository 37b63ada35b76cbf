use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Train and test row indices, each ascending: `⌊fraction·m_c⌋` rows of
/// every class go to train.
pub fn stratified_split_indices(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (vec![], vec![]);
    for label in [Label::Neg, Label::Pos] {
        let mut idx = data.class_indices(label);
        let k = (train_fraction * idx.len() as f64).floor() as usize;
        if k == 0 || k == idx.len() {
            return Err(Error::InvalidParameter(format!(
                "class {label} with {} instances leaves an empty train or test side at fraction {train_fraction}",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn stratified_split(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let (train, test) = stratified_split_indices(data, train_fraction, seed)?;
    Ok((data.subset(&train), data.subset(&test)))
}

/// `k` disjoint folds of row indices (each ascending); every class is
/// shuffled and dealt round-robin, so per-class fold sizes differ by ≤ 1.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![vec![]; k];
    let mut next = 0;
    for label in [Label::Neg, Label::Pos] {
        let mut idx = data.class_indices(label);
        if idx.len() < k {
            return Err(Error::InvalidParameter(format!(
                "class {label} has {} instances, fewer than {k} folds",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for i in idx {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}
