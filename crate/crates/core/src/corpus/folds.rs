//! Seeded k-fold splits and chronological prefix splits.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{DatasetSplit, LabeledPair, Verdict};
use crate::error::{Error, Result};

/// Split pairs into k folds via a seeded permutation. Test sets partition
/// the data with sizes differing by at most one (the first `n mod k`
/// folds take the extra element); both halves of every split keep the
/// original input order.
pub fn make_folds(pairs: &[LabeledPair], k: usize, seed: u64) -> Result<Vec<DatasetSplit>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    if pairs.len() < k {
        return Err(Error::InvalidInput(format!(
            "need at least {k} pairs for {k} folds, got {}",
            pairs.len()
        )));
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(splits_from_buckets(pairs, &bucketize(&order, k)))
}

/// Like [`make_folds`] but whole id-groups stay in one fold, so the four
/// combinations produced by multilingual expansion never straddle a
/// train/test boundary. The group of a pair is its id with any trailing
/// combination tag (`-aa`, `-ab`, `-ba`, `-bb`) stripped.
pub fn make_folds_grouped(pairs: &[LabeledPair], k: usize, seed: u64) -> Result<Vec<DatasetSplit>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    // Group keys in first-appearance order, then member indices per group.
    let mut keys: Vec<&str> = Vec::new();
    let mut members: std::collections::HashMap<&str, Vec<usize>> = std::collections::HashMap::new();
    for (i, p) in pairs.iter().enumerate() {
        let key = group_key(&p.id);
        members.entry(key).or_insert_with(|| {
            keys.push(key);
            Vec::new()
        });
        members.get_mut(key).unwrap().push(i);
    }
    if keys.len() < k {
        return Err(Error::InvalidInput(format!(
            "need at least {k} id groups for {k} folds, got {}",
            keys.len()
        )));
    }
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let group_buckets = bucketize(&order, k);
    let index_buckets: Vec<Vec<usize>> = group_buckets
        .iter()
        .map(|bucket| {
            bucket
                .iter()
                .flat_map(|&g| members[keys[g]].iter().copied())
                .collect()
        })
        .collect();
    Ok(splits_from_buckets(pairs, &index_buckets))
}

/// Strip one trailing multilingual combination tag, if present.
pub(crate) fn group_key(id: &str) -> &str {
    for tag in crate::corpus::expand::COMBINATION_TAGS {
        if let Some(stripped) = id.strip_suffix(tag) {
            if let Some(stem) = stripped.strip_suffix('-') {
                return stem;
            }
        }
    }
    id
}

/// Distribute a permutation into k contiguous buckets; the first
/// `n mod k` buckets receive one extra element.
fn bucketize(order: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = order.len();
    let base = n / k;
    let extra = n % k;
    let mut buckets = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let len = base + usize::from(fold < extra);
        buckets.push(order[start..start + len].to_vec());
        start += len;
    }
    buckets
}

fn splits_from_buckets(pairs: &[LabeledPair], buckets: &[Vec<usize>]) -> Vec<DatasetSplit> {
    buckets
        .iter()
        .enumerate()
        .map(|(fold, bucket)| {
            let test_set: HashSet<usize> = bucket.iter().copied().collect();
            let mut train = Vec::with_capacity(pairs.len() - bucket.len());
            let mut test = Vec::with_capacity(bucket.len());
            for (i, p) in pairs.iter().enumerate() {
                if test_set.contains(&i) {
                    test.push(p.clone());
                } else {
                    train.push(p.clone());
                }
            }
            DatasetSplit {
                train,
                test,
                fold_index: fold + 1,
            }
        })
        .collect()
}

/// Nested chronological training prefixes plus a most-recent test set.
#[derive(Debug, Clone)]
pub struct ChronoSplits {
    /// One training set per requested size, each a prefix of the next.
    pub trains: Vec<Vec<Verdict>>,
    /// The `test_size` most recent verdicts.
    pub test: Vec<Verdict>,
}

/// Order verdicts chronologically (stable on date ties, so input order
/// breaks them) and cut nested earliest-prefix training sets of the
/// requested sizes plus a test set of the most recent verdicts.
pub fn chronological_prefix_splits(
    verdicts: &[Verdict],
    sizes: &[usize],
    test_size: usize,
) -> Result<ChronoSplits> {
    if test_size == 0 {
        return Err(Error::InvalidInput("test_size must be positive".to_string()));
    }
    for w in sizes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput(format!(
                "sizes must be strictly ascending, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    if sizes.first().is_some_and(|&s| s == 0) {
        return Err(Error::InvalidInput("train sizes must be positive".to_string()));
    }
    let max_train = sizes.last().copied().unwrap_or(0);
    if max_train + test_size > verdicts.len() {
        return Err(Error::InvalidInput(format!(
            "need {} verdicts (max train {} + test {}), got {}",
            max_train + test_size,
            max_train,
            test_size,
            verdicts.len()
        )));
    }

    let mut ordered: Vec<&Verdict> = verdicts.iter().collect();
    ordered.sort_by_key(|v| v.date);

    let trains = sizes
        .iter()
        .map(|&s| ordered[..s].iter().map(|v| (*v).clone()).collect())
        .collect();
    let test = ordered[ordered.len() - test_size..]
        .iter()
        .map(|v| (*v).clone())
        .collect();
    Ok(ChronoSplits { trains, test })
}
