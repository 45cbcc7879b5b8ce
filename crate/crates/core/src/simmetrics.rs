//! Similarity measures over vectors and entity sets.
//!
//! All zero-denominator cases return 0 rather than erroring, so feature
//! vectors built from these scores stay total. Set measures operate on
//! supports (distinct entities) except the weighted intersection, which
//! uses occurrence counts.

use crate::error::{Error, Result};
use crate::textrep::{DenseVector, EntitySet, SparseVector};

/// Finite stand-in for the −∞ floor of an empty max-pool under
/// neg_euclidean; feature vectors must stay finite.
pub const NEG_EUCLIDEAN_FLOOR: f64 = -1.0e12;

/// Every metric the toolkit can emit as a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Cosine,
    NegEuclidean,
    Jaccard,
    Dice,
    Overlap,
    CosineSet,
    WeightedIntersection,
    UnionSize,
}

impl MetricId {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Cosine => "cosine",
            MetricId::NegEuclidean => "neg_euclidean",
            MetricId::Jaccard => "jaccard",
            MetricId::Dice => "dice",
            MetricId::Overlap => "overlap",
            MetricId::CosineSet => "cosine_set",
            MetricId::WeightedIntersection => "weighted_intersection",
            MetricId::UnionSize => "union_size",
        }
    }
}

impl std::fmt::Display for MetricId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Metrics over a pair of vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorMetric {
    Cosine,
    NegEuclidean,
}

impl VectorMetric {
    pub fn metric_id(self) -> MetricId {
        match self {
            VectorMetric::Cosine => MetricId::Cosine,
            VectorMetric::NegEuclidean => MetricId::NegEuclidean,
        }
    }

    /// Score floor used when max-pooling over an empty sentence list.
    pub fn empty_floor(self) -> f64 {
        match self {
            VectorMetric::Cosine => -1.0,
            VectorMetric::NegEuclidean => NEG_EUCLIDEAN_FLOOR,
        }
    }
}

impl std::str::FromStr for VectorMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "cosine" => Ok(VectorMetric::Cosine),
            "neg_euclidean" => Ok(VectorMetric::NegEuclidean),
            other => Err(Error::InvalidInput(format!("unknown vector metric {other:?}"))),
        }
    }
}

/// Metrics over a pair of entity sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetMetric {
    Jaccard,
    Dice,
    Overlap,
    CosineSet,
    WeightedIntersection,
    UnionSize,
}

impl SetMetric {
    pub const ALL: [SetMetric; 6] = [
        SetMetric::Jaccard,
        SetMetric::Dice,
        SetMetric::Overlap,
        SetMetric::CosineSet,
        SetMetric::WeightedIntersection,
        SetMetric::UnionSize,
    ];

    pub fn metric_id(self) -> MetricId {
        match self {
            SetMetric::Jaccard => MetricId::Jaccard,
            SetMetric::Dice => MetricId::Dice,
            SetMetric::Overlap => MetricId::Overlap,
            SetMetric::CosineSet => MetricId::CosineSet,
            SetMetric::WeightedIntersection => MetricId::WeightedIntersection,
            SetMetric::UnionSize => MetricId::UnionSize,
        }
    }
}

impl std::str::FromStr for SetMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|m| m.metric_id().as_str() == s.trim().to_lowercase())
            .ok_or_else(|| Error::InvalidInput(format!("unknown set metric {s:?}")))
    }
}

/// A metric value tagged with the metric that produced it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub metric: MetricId,
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Cosine similarity u·v / (|u||v|); 0 when either norm is 0.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<SimilarityScore> {
    check_dims(u.len(), v.len())?;
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|b| b * b).sum::<f64>().sqrt();
    let value = if nu == 0.0 || nv == 0.0 {
        0.0
    } else {
        dot / (nu * nv)
    };
    Ok(SimilarityScore {
        value,
        metric: MetricId::Cosine,
    })
}

/// Negated Euclidean distance −√Σ(uᵢ−vᵢ)²; 0 iff u = v.
pub fn neg_euclidean(u: &[f64], v: &[f64]) -> Result<SimilarityScore> {
    check_dims(u.len(), v.len())?;
    let dist: f64 = u
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(SimilarityScore {
        value: -dist,
        metric: MetricId::NegEuclidean,
    })
}

/// Cosine over sparse vectors.
pub fn cosine_sparse(u: &SparseVector, v: &SparseVector) -> Result<SimilarityScore> {
    check_dims(u.dim(), v.dim())?;
    let (nu, nv) = (u.l2_norm(), v.l2_norm());
    let value = if nu == 0.0 || nv == 0.0 {
        0.0
    } else {
        u.dot(v) / (nu * nv)
    };
    Ok(SimilarityScore {
        value,
        metric: MetricId::Cosine,
    })
}

/// Negated Euclidean distance over sparse vectors.
pub fn neg_euclidean_sparse(u: &SparseVector, v: &SparseVector) -> Result<SimilarityScore> {
    check_dims(u.dim(), v.dim())?;
    // |u−v|² = |u|² + |v|² − 2u·v, clamped against rounding below zero.
    let squared = u.l2_norm().powi(2) + v.l2_norm().powi(2) - 2.0 * u.dot(v);
    Ok(SimilarityScore {
        value: -squared.max(0.0).sqrt(),
        metric: MetricId::NegEuclidean,
    })
}

fn intersection_support(a: &EntitySet, b: &EntitySet) -> usize {
    a.iter().filter(|(e, _)| b.contains(e)).count()
}

/// Set similarity of the requested kind; see module docs for the
/// zero-denominator convention.
pub fn set_similarity(kind: SetMetric, a: &EntitySet, b: &EntitySet) -> SimilarityScore {
    let na = a.distinct() as f64;
    let nb = b.distinct() as f64;
    let inter = intersection_support(a, b) as f64;
    let union = na + nb - inter;

    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let value = match kind {
        SetMetric::Jaccard => ratio(inter, union),
        SetMetric::Dice => ratio(2.0 * inter, na + nb),
        SetMetric::Overlap => ratio(inter, na.min(nb)),
        SetMetric::CosineSet => ratio(inter, (na * nb).sqrt()),
        SetMetric::WeightedIntersection => {
            let shared: u64 = a
                .iter()
                .filter_map(|(e, ca)| {
                    let cb = b.count(e);
                    (cb > 0).then(|| ca.min(cb))
                })
                .sum();
            ratio(shared as f64, a.total().min(b.total()) as f64)
        }
        SetMetric::UnionSize => ratio(union, na + nb),
    };
    SimilarityScore {
        value,
        metric: kind.metric_id(),
    }
}

/// Highest metric value between the statement vector and any sentence
/// vector; an empty list yields the metric's floor.
pub fn max_sentence_similarity(
    stmt_vec: &[f64],
    sentence_vecs: &[DenseVector],
    metric: VectorMetric,
) -> Result<SimilarityScore> {
    let mut best = metric.empty_floor();
    for s in sentence_vecs {
        let score = match metric {
            VectorMetric::Cosine => cosine(stmt_vec, s)?,
            VectorMetric::NegEuclidean => neg_euclidean(stmt_vec, s)?,
        };
        best = best.max(score.value);
    }
    Ok(SimilarityScore {
        value: best,
        metric: metric.metric_id(),
    })
}

/// Sparse-vector variant of [`max_sentence_similarity`].
pub fn max_sentence_similarity_sparse(
    stmt_vec: &SparseVector,
    sentence_vecs: &[SparseVector],
    metric: VectorMetric,
) -> Result<SimilarityScore> {
    let mut best = metric.empty_floor();
    for s in sentence_vecs {
        let score = match metric {
            VectorMetric::Cosine => cosine_sparse(stmt_vec, s)?,
            VectorMetric::NegEuclidean => neg_euclidean_sparse(stmt_vec, s)?,
        };
        best = best.max(score.value);
    }
    Ok(SimilarityScore {
        value: best,
        metric: metric.metric_id(),
    })
}
