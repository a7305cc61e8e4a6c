//! Relevance and coverage metrics, plus Spearman rank correlation.
//!
//! Coverage of a set `S` by a subset `A` is the mean best-match similarity
//! `δ_avg^S = (1/|S|) Σ_{i∈S} max_{j∈A} s_ij`. Relevance is the targeted
//! count χ = |A ∩ T| (see [`crate::dataset::subset_partition_counts`]).
//!
//! Correlations are computed the way the result tables prescribe: both
//! sequences are ranked with the *ordinal* method (ties split by original
//! position, stably), then the Pearson coefficient of the two rank vectors
//! is returned.

use crate::dataset::{SimilarityMatrix, Subset};
use crate::error::{Error, Result};

/// Which set the coverage mean runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaTarget {
    /// The query block `Q`.
    Query,
    /// The targeted instances not selected, `T \ A`.
    TMinusA,
}

/// Mean over the target set of the maximum similarity to any member of `A`.
pub fn delta_avg(subset: &Subset, target: DeltaTarget, matrix: &SimilarityMatrix) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_range(matrix.ground_len())?;
    let rows: Vec<usize> = match target {
        DeltaTarget::Query => (0..matrix.query_len()).map(|q| matrix.query_row(q)).collect(),
        DeltaTarget::TMinusA => (0..matrix.targeted_len())
            .filter(|&i| !subset.contains(i))
            .collect(),
    };
    if rows.is_empty() {
        return Err(Error::EmptyTargetSet);
    }
    let total: f64 = rows
        .iter()
        .map(|&row| {
            subset
                .members()
                .iter()
                .fold(0.0f64, |acc, &j| acc.max(matrix.get(row, j)))
        })
        .sum();
    Ok(total / rows.len() as f64)
}

/// Ordinal ranks 1..n: sort by value, ties broken by original index (stable).
fn ordinal_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    for (rank, &original) in order.iter().enumerate() {
        ranks[original] = (rank + 1) as f64;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den_x = 0.0;
    let mut den_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        num += dx * dy;
        den_x += dx * dx;
        den_y += dy * dy;
    }
    num / (den_x * den_y).sqrt()
}

/// Spearman rank correlation with ordinal tie splitting.
///
/// Ordinal ranks are a permutation of 1..n, so the rank variance is never
/// zero and the result is always defined for n ≥ 2.
pub fn spearman_ordinal(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewSamples(xs.len()));
    }
    Ok(pearson(&ordinal_ranks(xs), &ordinal_ranks(ys)))
}

/// One sampled subset with its objective value and metrics.
#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub subset: Subset,
    pub smi_value: f64,
    pub chi: usize,
    pub delta_avg_q: f64,
    /// Absent when every targeted instance is inside the subset.
    pub delta_avg_t_minus_a: Option<f64>,
}
