use crate::error::{Error, Result};
use crate::geometry::{ExactCounter, Metric, PointSet};
use crate::scalar::Scalar;

/// Largest `N` for the closed-form counter.
pub const BLOCKS_COUNT_LIMIT: u64 = 1 << 60;
/// Largest `N` for materialization.
pub const BLOCKS_MATERIALIZE_LIMIT: u64 = 1 << 30;

/// `|A ∩ [1, N]|` for `A = ⋃_{n≥1} {2^n + j : 0 ≤ j < n}`.
pub fn dyadic_blocks_count(n: u64) -> u64 {
    let mut total = 0;
    let mut k = 1u32;
    while k < 64 && (1u64 << k) <= n {
        let start = 1u64 << k;
        total += (k as u64).min(n - start + 1);
        k += 1;
    }
    total
}

/// The block `A_n = {2^n + j : 0 ≤ j < n}`.
pub fn dyadic_block(n: u32) -> Vec<u64> {
    (0..n as u64).map(|j| (1u64 << n) + j).collect()
}

/// `A ∩ [1, N]` on the real line with its closed-form counter.
pub fn gen_dyadic_blocks<S: Scalar>(bound: u64) -> Result<PointSet<S>> {
    if bound > BLOCKS_MATERIALIZE_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "materializing up to {bound} exceeds {BLOCKS_MATERIALIZE_LIMIT}; use the counter"
        )));
    }
    let mut flat = Vec::new();
    let mut k = 1u32;
    while (1u64 << k) <= bound {
        flat.extend(dyadic_block(k).into_iter().filter(|&v| v <= bound).map(|v| S::of(v as f64)));
        k += 1;
    }
    let (set, _) = PointSet::from_flat(1, flat, Metric::Euclidean)?;
    Ok(set
        .with_sample_radius(S::of(bound as f64))?
        .with_counter(ExactCounter::new(BLOCKS_COUNT_LIMIT as f64, |r| dyadic_blocks_count(r.floor() as u64)))
        .with_known_gap(S::one()))
}
