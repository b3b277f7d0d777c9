//! Unbounded knapsack by dynamic programming over capacities `0..=W`.

use crate::error::{Error, Result};

/// Counts `a` maximizing `aᵀ values` subject to `aᵀ weights ≤ capacity`.
///
/// Among maximizers the lexicographically smallest count vector is returned:
/// `best[i][c]` holds the optimum over items `i..` with capacity `c`, and the
/// reconstruction takes the fewest copies of each item in index order that
/// still attain it.
pub fn knapsack_oracle(weights: &[u32], capacity: u32, values: &[f64]) -> Result<Vec<u32>> {
    if weights.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            actual: values.len(),
        });
    }
    if weights.contains(&0) {
        return Err(Error::InvalidInstance("knapsack weights must be positive".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInstance("knapsack values must be finite".into()));
    }
    let d = weights.len();
    let cap = capacity as usize;
    let stride = cap + 1;
    let mut best = vec![0.0f64; (d + 1) * stride];
    for i in (0..d).rev() {
        let w = weights[i] as usize;
        for c in 0..=cap {
            let mut top = f64::NEG_INFINITY;
            for k in 0..=c / w {
                let v = k as f64 * values[i] + best[(i + 1) * stride + c - k * w];
                if v > top {
                    top = v;
                }
            }
            best[i * stride + c] = top;
        }
    }
    let mut counts = vec![0u32; d];
    let mut c = cap;
    for i in 0..d {
        let w = weights[i] as usize;
        let target = best[i * stride + c];
        let k = (0..=c / w)
            .find(|&k| k as f64 * values[i] + best[(i + 1) * stride + c - k * w] == target)
            .expect("the maximum is attained by one of its candidates");
        counts[i] = k as u32;
        c -= k * w;
    }
    Ok(counts)
}
