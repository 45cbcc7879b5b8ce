//! Greedy binary decision trees split on Gini impurity.

/// One tree node. Rows with `value <= threshold` go left.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        class: u8,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        match self {
            TreeNode::Leaf { class } => *class,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if row[*feature] <= *threshold {
                    left.predict_row(row)
                } else {
                    right.predict_row(row)
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Smallest number of training rows that reached any leaf.
    #[cfg(test)]
    pub(crate) fn min_leaf_size(&self, rows: &[Vec<f64>], indices: &[usize]) -> usize {
        match self {
            TreeNode::Leaf { .. } => indices.len(),
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .iter()
                    .partition(|&&i| rows[i][*feature] <= *threshold);
                left.min_leaf_size(rows, &left_idx)
                    .min(right.min_leaf_size(rows, &right_idx))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TreeParams {
    pub root: TreeNode,
}

pub(crate) fn train(max_depth: usize, min_leaf: usize, rows: &[Vec<f64>], y: &[u8]) -> TreeParams {
    let d = rows.first().map_or(0, Vec::len);
    let all: Vec<usize> = (0..rows.len()).collect();
    let mut every_feature = |_d: usize| (0..d).collect::<Vec<usize>>();
    TreeParams {
        root: grow(rows, y, &all, 0, max_depth, min_leaf, &mut every_feature),
    }
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

fn class_counts(y: &[u8], indices: &[usize]) -> [usize; 2] {
    let mut counts = [0usize; 2];
    for &i in indices {
        counts[y[i] as usize] += 1;
    }
    counts
}

/// Majority class; ties resolve to class 0.
fn majority(counts: [usize; 2]) -> u8 {
    u8::from(counts[1] > counts[0])
}

/// Grows one subtree over `indices`. `feature_sampler` returns the candidate
/// features for each node (all of them for plain trees, a random subset for
/// forests); it must yield ascending indices so the scan order — and with it
/// tie-breaking — is deterministic.
pub(crate) fn grow(
    rows: &[Vec<f64>],
    y: &[u8],
    indices: &[usize],
    depth: usize,
    max_depth: usize,
    min_leaf: usize,
    feature_sampler: &mut dyn FnMut(usize) -> Vec<usize>,
) -> TreeNode {
    let counts = class_counts(y, indices);
    let parent_gini = gini(counts);
    if depth >= max_depth || parent_gini == 0.0 || indices.len() < 2 * min_leaf {
        return TreeNode::Leaf {
            class: majority(counts),
        };
    }

    let d = rows.first().map_or(0, Vec::len);
    let n = indices.len() as f64;
    let mut best: Option<(f64, usize, f64)> = None; // (weighted gini, feature, threshold)

    for feature in feature_sampler(d) {
        let mut values: Vec<f64> = indices.iter().map(|&i| rows[i][feature]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = pair[0] + (pair[1] - pair[0]) / 2.0;
            let mut left = [0usize; 2];
            let mut right = [0usize; 2];
            for &i in indices {
                if rows[i][feature] <= threshold {
                    left[y[i] as usize] += 1;
                } else {
                    right[y[i] as usize] += 1;
                }
            }
            let (nl, nr) = (left[0] + left[1], right[0] + right[1]);
            if nl < min_leaf || nr < min_leaf {
                continue;
            }
            let weighted = (nl as f64 * gini(left) + nr as f64 * gini(right)) / n;
            // Zero-gain splits are allowed (they can enable useful child
            // splits, e.g. on XOR); replacement needs strict improvement so
            // ties keep the earliest (feature asc, threshold asc) candidate.
            let improves = match best {
                None => true,
                Some((best_weighted, ..)) => weighted < best_weighted,
            };
            if improves {
                best = Some((weighted, feature, threshold));
            }
        }
    }

    let Some((_, feature, threshold)) = best else {
        return TreeNode::Leaf {
            class: majority(counts),
        };
    };

    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| rows[i][feature] <= threshold);
    let left = grow(rows, y, &left_idx, depth + 1, max_depth, min_leaf, feature_sampler);
    let right = grow(rows, y, &right_idx, depth + 1, max_depth, min_leaf, feature_sampler);
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_data() -> (Vec<Vec<f64>>, Vec<u8>) {
        (
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
        )
    }

    #[test]
    fn depth_two_tree_fits_xor() {
        let (rows, y) = xor_data();
        let params = train(2, 1, &rows, &y);
        let preds: Vec<u8> = rows.iter().map(|r| params.root.predict_row(r)).collect();
        assert_eq!(preds, y);
        assert_eq!(params.root.depth(), 2);
    }

    #[test]
    fn depth_one_stump_cannot_fit_xor() {
        let (rows, y) = xor_data();
        let params = train(1, 1, &rows, &y);
        let correct = rows
            .iter()
            .zip(&y)
            .filter(|(r, &label)| params.root.predict_row(r) == label)
            .count();
        assert!(correct < 4);
        assert!(params.root.depth() <= 1);
    }

    #[test]
    fn pure_node_becomes_leaf_immediately() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let y = vec![1, 1, 1, 0];
        let params = train(10, 1, &rows, &y);
        // One split suffices: {0,1,2} pure 1, {3} pure 0.
        assert_eq!(params.root.depth(), 1);
    }

    #[test]
    fn min_leaf_blocks_small_children() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let y = vec![0, 0, 1, 1];
        let params = train(10, 3, &rows, &y);
        // Any split would leave a child below 3 rows, so the root is a leaf.
        assert_eq!(params.root, TreeNode::Leaf { class: 0 });

        let params = train(10, 2, &rows, &y);
        let all: Vec<usize> = (0..rows.len()).collect();
        assert!(params.root.min_leaf_size(&rows, &all) >= 2);
    }

    #[test]
    fn leaf_majority_tie_is_class_zero() {
        // Identical feature values: nothing to split on, 2 vs 2 labels.
        let rows = vec![vec![5.0]; 4];
        let y = vec![0, 1, 1, 0];
        let params = train(4, 1, &rows, &y);
        assert_eq!(params.root, TreeNode::Leaf { class: 0 });
    }

    #[test]
    fn training_is_deterministic() {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.61).cos()])
            .collect();
        let y: Vec<u8> = (0..30).map(|i| u8::from(i % 3 == 0)).collect();
        assert_eq!(train(6, 1, &rows, &y), train(6, 1, &rows, &y));
    }

    #[test]
    fn threshold_lies_between_observed_values() {
        let rows = vec![vec![1.0], vec![2.0], vec![4.0], vec![8.0]];
        let y = vec![0, 0, 1, 1];
        let params = train(3, 1, &rows, &y);
        let TreeNode::Split { threshold, .. } = params.root else {
            panic!("expected a split");
        };
        assert_eq!(threshold, 3.0);
    }
}
