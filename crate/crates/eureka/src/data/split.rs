//! Seeded stratified train/test splitting.

use super::{DataError, Dataset};
use crate::seeding::mix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Splits row indices so each class contributes `round(count * test_fraction)`
/// rows to the test side. Returns `(train, test)` indices, each ascending.
///
/// Deterministic given the seed: rows of each class are shuffled by a
/// class-specific generator derived from it.
pub fn stratified_split_indices(
    class_ids: &[usize],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    split_with_names(class_ids, test_fraction, seed, |c| c.to_string())
}

fn split_with_names(
    class_ids: &[usize],
    test_fraction: f64,
    seed: u64,
    class_name: impl Fn(usize) -> String,
) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DataError::InvalidTestFraction(test_fraction));
    }
    let n_classes = class_ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in class_ids.iter().enumerate() {
        by_class[c].push(i);
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, mut members) in by_class.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let count = members.len();
        let want_test = (count as f64 * test_fraction).round() as usize;
        if want_test == 0 || want_test >= count {
            return Err(DataError::ClassTooSmall {
                class: class_name(c),
                rows: count,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, c as u64]));
        members.shuffle(&mut rng);
        test.extend_from_slice(&members[..want_test]);
        train.extend_from_slice(&members[want_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Splits a dataset into stratified train and test parts.
pub fn stratified_split(
    ds: &Dataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DataError> {
    let class_ids = ds.class_ids();
    let (train_idx, test_idx) = split_with_names(&class_ids, test_fraction, seed, |c| {
        ds.schema.classes[c].clone()
    })?;
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}
