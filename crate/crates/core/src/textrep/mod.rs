//! Text representations: TFIDF sparse vectors over a parameter grid,
//! sentence segmentation, and pluggable embedding / named-entity
//! providers (file-backed tables, HTTP services, or a capitalization
//! heuristic for entities).

mod providers;
mod sentence;
mod tfidf;

pub use providers::{
    extract_entity_set, get_embedding, EmbeddingManifest, EmbeddingProvider, FileEmbeddingProvider,
    FileNerProvider, HeuristicNer, HttpEmbeddingProvider, HttpNerProvider, NerProvider,
};
pub use sentence::segment_sentences;
pub use tfidf::{fit_tfidf, tfidf_grid, transform_tfidf, TfidfModel, TfidfParams};

use std::collections::BTreeMap;

/// Dense embedding vector.
pub type DenseVector = Vec<f64>;

/// Sparse vector with sorted, strictly nonzero entries.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Build from arbitrary (index, value) pairs: zeros are dropped,
    /// entries sorted by index. Indices must be < `dim` and distinct.
    pub fn from_entries(dim: usize, mut entries: Vec<(usize, f64)>) -> Self {
        entries.retain(|&(_, v)| v != 0.0);
        entries.sort_by_key(|&(i, _)| i);
        debug_assert!(entries.iter().all(|&(i, _)| i < dim));
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Dot product via sorted-merge. Dimensions must already agree.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < self.entries.len() && j < other.entries.len() {
            let (a, av) = self.entries[i];
            let (b, bv) = other.entries[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += av * bv;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn scale(&mut self, factor: f64) {
        for (_, v) in &mut self.entries {
            *v *= factor;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

/// Multiset of case-normalized entity surface strings. Stored counts are
/// always ≥ 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EntitySet(BTreeMap<String, u64>);

impl EntitySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one occurrence of an entity.
    pub fn add(&mut self, entity: impl Into<String>) {
        *self.0.entry(entity.into()).or_insert(0) += 1;
    }

    /// Add `count` occurrences; a zero count is a no-op.
    pub fn add_count(&mut self, entity: impl Into<String>, count: u64) {
        if count > 0 {
            *self.0.entry(entity.into()).or_insert(0) += count;
        }
    }

    pub fn count(&self, entity: &str) -> u64 {
        self.0.get(entity).copied().unwrap_or(0)
    }

    pub fn contains(&self, entity: &str) -> bool {
        self.0.contains_key(entity)
    }

    /// Number of distinct entities (support size).
    pub fn distinct(&self) -> usize {
        self.0.len()
    }

    /// Sum of all occurrence counts.
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<S: Into<String>> FromIterator<S> for EntitySet {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        let mut set = EntitySet::new();
        for e in iter {
            set.add(e);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_vector_drops_zeros_and_sorts() {
        let v = SparseVector::from_entries(5, vec![(3, 2.0), (1, 0.0), (0, -1.0)]);
        assert_eq!(v.entries(), &[(0, -1.0), (3, 2.0)]);
        assert_eq!(v.get(1), 0.0);
        assert_eq!(v.get(3), 2.0);
        assert_eq!(v.dim(), 5);
    }

    #[test]
    fn sparse_dot_and_norm() {
        let u = SparseVector::from_entries(4, vec![(0, 1.0), (2, 2.0)]);
        let v = SparseVector::from_entries(4, vec![(2, 3.0), (3, 1.0)]);
        assert_eq!(u.dot(&v), 6.0);
        assert_eq!(u.l2_norm(), 5.0_f64.sqrt());
        assert_eq!(u.to_dense(), vec![1.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn entity_set_counts() {
        let mut s = EntitySet::new();
        s.add("anne rice");
        s.add("anne rice");
        s.add_count("san francisco", 3);
        s.add_count("ignored", 0);
        assert_eq!(s.count("anne rice"), 2);
        assert_eq!(s.distinct(), 2);
        assert_eq!(s.total(), 5);
        assert!(!s.contains("ignored"));
    }
}
