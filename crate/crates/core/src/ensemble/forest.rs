//! Bagged forests of Gini trees with per-tree seeds.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::tree::{grow, TreeNode};
use crate::hashing::sub_seed;
use crate::par;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ForestParams {
    pub trees: Vec<TreeNode>,
}

/// Trains `n_trees` trees, each from its own sub-seed so the result does not
/// depend on scheduling. With `bootstrap` on, every tree sees a resampled
/// training set and each node scans a fresh √d feature subset; with it off
/// both samplings are disabled, making a 1-tree forest identical to a plain
/// decision tree.
pub(crate) fn train(
    n_trees: usize,
    max_depth: usize,
    min_leaf: usize,
    bootstrap: bool,
    seed: u64,
    rows: &[Vec<f64>],
    y: &[u8],
) -> ForestParams {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let subset_size = (d as f64).sqrt().floor().max(1.0) as usize;

    let trees = par::map_range(n_trees, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, &format!("tree-{t}")));
        let indices: Vec<usize> = if bootstrap {
            (0..n).map(|_| rng.gen_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        let mut sampler = |total: usize| -> Vec<usize> {
            if bootstrap {
                let mut picked = rand::seq::index::sample(&mut rng, total, subset_size.min(total))
                    .into_vec();
                picked.sort_unstable();
                picked
            } else {
                (0..total).collect()
            }
        };
        grow(rows, y, &indices, 0, max_depth, min_leaf, &mut sampler)
    });
    ForestParams { trees }
}

/// Majority vote across trees; ties resolve to class 0.
pub(crate) fn predict_row(params: &ForestParams, row: &[f64]) -> u8 {
    let ones = params
        .trees
        .iter()
        .filter(|tree| tree.predict_row(row) == 1)
        .count();
    u8::from(ones * 2 > params.trees.len())
}
