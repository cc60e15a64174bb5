use crate::error::{invalid, Error, Result};
use crate::geometry::{ExactCounter, Metric, PointSet};
use crate::scalar::Scalar;

/// Materialization cap on the number of points of a power set.
pub const POWER_POINT_BUDGET: u64 = 10_000_000;

/// Largest `N` accepted by the power-set counter.
pub const POWER_COUNT_LIMIT: f64 = 4.0e18;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(invalid(
            "statement/proof range mismatch, only α>1 supported for power sets {n^α}",
        ));
    }
    Ok(())
}

/// `n^α`, exact for integer exponents while the result fits in u128.
fn pow_le(n: u64, alpha: f64, bound: f64) -> bool {
    if alpha.fract() == 0.0 && alpha <= 64.0 {
        let cap = bound.floor() as u128;
        let mut acc: u128 = 1;
        for _ in 0..alpha as u32 {
            acc = match acc.checked_mul(n as u128) {
                Some(v) if v <= cap => v,
                _ => return false,
            };
        }
        acc <= cap
    } else {
        (n as f64).powf(alpha) <= bound
    }
}

/// `|{n ≥ 1 : n^α ≤ N}| = ⌊N^{1/α}⌋`, corrected so perfect powers are not lost.
pub fn power_count(alpha: f64, bound: f64) -> u64 {
    if bound < 1.0 {
        return 0;
    }
    let mut n = bound.powf(1.0 / alpha).floor() as u64;
    while n > 0 && !pow_le(n, alpha, bound) {
        n -= 1;
    }
    while pow_le(n + 1, alpha, bound) {
        n += 1;
    }
    n
}

/// `n^α` as a real number (exact when `α` is a small integer).
pub fn power_value(n: u64, alpha: f64) -> f64 {
    if alpha.fract() == 0.0 && alpha <= 16.0 {
        (n as f64).powi(alpha as i32)
    } else {
        (n as f64).powf(alpha)
    }
}

/// `{n^α : n ≥ 1, n^α ≤ N}` with the counter `⌊N^{1/α}⌋`. Requires `α > 1`.
pub fn gen_power_set<S: Scalar>(alpha: f64, bound: f64) -> Result<PointSet<S>> {
    check_alpha(alpha)?;
    if !(bound >= 0.0) || bound > POWER_COUNT_LIMIT {
        return Err(invalid(format!("power-set bound must lie in [0, {POWER_COUNT_LIMIT:e}]")));
    }
    let count = power_count(alpha, bound);
    if count > POWER_POINT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{count} points of {{n^{alpha}}} up to {bound} (budget {POWER_POINT_BUDGET})"
        )));
    }
    let flat: Vec<S> = (1..=count).map(|n| S::of(power_value(n, alpha))).collect();
    let (set, _) = PointSet::from_flat(1, flat, Metric::Euclidean)?;
    // smallest gap is 2^α − 1
    let gap = S::of(2f64.powf(alpha) - 1.0);
    Ok(set
        .with_sample_radius(S::of(bound))?
        .with_counter(ExactCounter::new(POWER_COUNT_LIMIT, move |r| power_count(alpha, r)))
        .with_known_gap(gap))
}

/// An `r`-disjoint cover of `{n^α}` by uniformly bounded pieces:
/// `U_0 = {n^α : n ≤ t}` and singletons `U_j = {(t+j)^α}`.
#[derive(Clone, Debug)]
pub struct AsdimCover {
    pub t: u64,
    pub pieces: Vec<Vec<f64>>,
    /// `dist(U_j, U_{j+1})` for consecutive pieces.
    pub gaps: Vec<f64>,
    pub r: f64,
    /// Every consecutive gap is at least `r`.
    pub verified: bool,
}

impl AsdimCover {
    pub fn min_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest diameter among the pieces.
    pub fn max_diameter(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.last().copied().unwrap_or(0.0) - p.first().copied().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }

    /// Does the union of pieces contain every value?
    pub fn covers(&self, values: &[f64]) -> bool {
        values.iter().all(|v| self.pieces.iter().any(|p| p.contains(v)))
    }
}

/// Builds the cover with `t = ⌈(r/α)^{1/(α−1)}⌉` and `singletons` pieces after `U_0`.
pub fn asdim_demo_cover(alpha: f64, r: f64, singletons: usize) -> Result<AsdimCover> {
    check_alpha(alpha)?;
    if !(r > 0.0) {
        return Err(invalid("cover separation r must be positive"));
    }
    let t = ((r / alpha).powf(1.0 / (alpha - 1.0))).ceil().max(1.0) as u64;
    let mut pieces = vec![(1..=t).map(|n| power_value(n, alpha)).collect::<Vec<_>>()];
    for j in 1..=singletons as u64 {
        pieces.push(vec![power_value(t + j, alpha)]);
    }
    let gaps: Vec<f64> = pieces
        .windows(2)
        .map(|w| w[1][0] - *w[0].last().expect("nonempty piece"))
        .collect();
    let verified = gaps.iter().all(|&g| g >= r);
    Ok(AsdimCover { t, pieces, gaps, r, verified })
}
