//! TFIDF vectorizer with the grid-search parameter space.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::textrep::SparseVector;

/// One TFIDF parameter setting.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TfidfParams {
    /// Vocabulary cap: keep at most this many terms.
    pub n_features: usize,
    /// Inclusive word n-gram bounds (lo, hi).
    pub ngram_range: (usize, usize),
    /// Keep terms with df(t) ≤ floor(max_df · N); proportion in (0, 1].
    pub max_df: f64,
    /// Keep terms appearing in at least this many documents.
    pub min_df: usize,
}

impl TfidfParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.ngram_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidInput(format!(
                "degenerate ngram_range ({lo}, {hi})"
            )));
        }
        if self.n_features == 0 {
            return Err(Error::InvalidInput("n_features must be positive".into()));
        }
        if !(self.max_df > 0.0 && self.max_df <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "max_df must be in (0, 1], got {}",
                self.max_df
            )));
        }
        if self.min_df == 0 {
            return Err(Error::InvalidInput("min_df must be at least 1".into()));
        }
        Ok(())
    }

    /// Compact stable identifier used in grid-search reports.
    pub fn label(&self) -> String {
        format!(
            "nf{}_ng{}-{}_maxdf{}_mindf{}",
            self.n_features, self.ngram_range.0, self.ngram_range.1, self.max_df, self.min_df
        )
    }
}

/// The full 720-setting grid: n_features × ngram_range × max_df × min_df
/// in that nesting order (n_features outermost, min_df innermost).
pub fn tfidf_grid() -> Vec<TfidfParams> {
    const N_FEATURES: [usize; 6] = [20, 50, 100, 200, 500, 1000];
    const NGRAM_RANGES: [(usize, usize); 6] = [(1, 1), (2, 2), (3, 3), (1, 3), (1, 2), (2, 3)];
    const MAX_DF: [f64; 4] = [0.7, 0.8, 0.9, 1.0];
    const MIN_DF: [usize; 5] = [1, 3, 5, 7, 10];

    let mut grid = Vec::with_capacity(720);
    for n_features in N_FEATURES {
        for ngram_range in NGRAM_RANGES {
            for max_df in MAX_DF {
                for min_df in MIN_DF {
                    grid.push(TfidfParams {
                        n_features,
                        ngram_range,
                        max_df,
                        min_df,
                    });
                }
            }
        }
    }
    grid
}

/// Fitted vocabulary and idf weights under one parameter setting.
///
/// Terms are stored sorted lexicographically; a term's position is its
/// column index.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TfidfModel {
    pub params: TfidfParams,
    pub corpus_size: usize,
    terms: Vec<String>,
    idf: Vec<f64>,
    df: Vec<usize>,
}

impl TfidfModel {
    /// Vocabulary in column order.
    pub fn vocabulary(&self) -> &[String] {
        &self.terms
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn df(&self) -> &[usize] {
        &self.df
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }
}

/// Lowercase word tokens: maximal alphanumeric runs.
fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// All word n-grams within the inclusive range, joined by single spaces.
fn ngrams(tokens: &[String], lo: usize, hi: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in lo..=hi.min(tokens.len()) {
        for window in tokens.windows(n) {
            out.push(window.join(" "));
        }
    }
    out
}

/// Fit a TFIDF model: count document and corpus frequencies, apply the
/// df filters, cap the vocabulary at n_features (highest corpus
/// frequency first, lexicographic tie-break), and compute
/// idf(t) = ln((1+N)/(1+df(t))) + 1.
pub fn fit_tfidf<S: AsRef<str>>(corpus: &[S], params: TfidfParams) -> Result<TfidfModel> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(Error::InvalidInput("empty corpus".into()));
    }
    let (lo, hi) = params.ngram_range;
    let n = corpus.len();

    let mut df: HashMap<String, usize> = HashMap::new();
    let mut cf: HashMap<String, u64> = HashMap::new();
    for doc in corpus {
        let tokens = tokenize(doc.as_ref());
        let grams = ngrams(&tokens, lo, hi);
        let mut seen_in_doc: std::collections::HashSet<&str> = std::collections::HashSet::new();
        for gram in &grams {
            *cf.entry(gram.clone()).or_insert(0) += 1;
            seen_in_doc.insert(gram.as_str());
        }
        for gram in seen_in_doc {
            *df.entry(gram.to_string()).or_insert(0) += 1;
        }
    }

    // Small epsilon guards binary-fraction rounding in max_df · N.
    let max_count = ((params.max_df * n as f64) + 1e-9).floor() as usize;
    let mut kept: Vec<(&String, usize)> = df
        .iter()
        .filter(|&(_, &d)| d >= params.min_df && d <= max_count)
        .map(|(t, &d)| (t, d))
        .collect();

    if kept.len() > params.n_features {
        kept.sort_by(|a, b| cf[b.0].cmp(&cf[a.0]).then_with(|| a.0.cmp(b.0)));
        kept.truncate(params.n_features);
    }
    kept.sort_by(|a, b| a.0.cmp(b.0));

    let terms: Vec<String> = kept.iter().map(|(t, _)| (*t).clone()).collect();
    let df_col: Vec<usize> = kept.iter().map(|&(_, d)| d).collect();
    let idf: Vec<f64> = df_col
        .iter()
        .map(|&d| ((1 + n) as f64 / (1 + d) as f64).ln() + 1.0)
        .collect();

    Ok(TfidfModel {
        params,
        corpus_size: n,
        terms,
        idf,
        df: df_col,
    })
}

/// Transform text into the model's space: raw term count × idf, then
/// L2-normalized when nonzero. Out-of-vocabulary terms are ignored.
pub fn transform_tfidf(model: &TfidfModel, text: &str) -> SparseVector {
    let (lo, hi) = model.params.ngram_range;
    let tokens = tokenize(text);
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for gram in ngrams(&tokens, lo, hi) {
        if let Some(col) = model.column(&gram) {
            *counts.entry(col).or_insert(0.0) += 1.0;
        }
    }
    let entries: Vec<(usize, f64)> = counts
        .into_iter()
        .map(|(col, count)| (col, count * model.idf[col]))
        .collect();
    let mut vec = SparseVector::from_entries(model.dim(), entries);
    let norm = vec.l2_norm();
    if norm > 0.0 {
        vec.scale(1.0 / norm);
    }
    vec
}
