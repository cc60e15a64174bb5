use std::collections::HashMap;

use super::lattice::floor_sq;
use crate::error::{invalid, Error, Result};
use crate::geometry::{Metric, PointSet};
use crate::scalar::Scalar;

/// Largest element norm accepted by the brute-force irreducibility search.
pub const QUADRATIC_NORM_BUDGET: u64 = 1_000_000;

/// An imaginary quadratic integer `α`, a root of `x² − trace·x + norm` with
/// negative discriminant. `Z[α] = {a + bα : a, b ∈ Z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticInteger {
    pub trace: i64,
    pub norm: i64,
}

impl QuadraticInteger {
    pub fn new(trace: i64, norm: i64) -> Result<Self> {
        if trace * trace - 4 * norm >= 0 {
            return Err(invalid(format!(
                "x² − {trace}x + {norm} has nonnegative discriminant; α must be imaginary"
            )));
        }
        Ok(QuadraticInteger { trace, norm })
    }

    /// `α = i`.
    pub fn gaussian() -> Self {
        QuadraticInteger { trace: 0, norm: 1 }
    }

    /// `α = √−n` for `n ≥ 1`.
    pub fn sqrt_neg(n: i64) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn discriminant(&self) -> i64 {
        self.trace * self.trace - 4 * self.norm
    }

    /// Field norm of `a + bα`.
    pub fn element_norm(&self, a: i64, b: i64) -> i64 {
        a * a + a * b * self.trace + b * b * self.norm
    }

    /// `(a + bα)(c + dα)` using `α² = trace·α − norm`.
    pub fn mul(&self, (a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
        (a * c - self.norm * b * d, a * d + b * c + self.trace * b * d)
    }

    /// Complex conjugate `a + bᾱ = (a + b·trace) − bα`.
    pub fn conj(&self, (a, b): (i64, i64)) -> (i64, i64) {
        (a + b * self.trace, -b)
    }

    /// Does `y` divide `x` in `Z[α]`?
    pub fn divides(&self, y: (i64, i64), x: (i64, i64)) -> bool {
        let m = self.element_norm(y.0, y.1);
        if m == 0 {
            return false;
        }
        let (p, q) = self.mul(x, self.conj(y));
        p % m == 0 && q % m == 0
    }

    /// Complex embedding of `a + bα`.
    pub fn embed(&self, a: i64, b: i64) -> (f64, f64) {
        let half_root = ((-self.discriminant()) as f64).sqrt() / 2.0;
        (a as f64 + b as f64 * self.trace as f64 / 2.0, b as f64 * half_root)
    }

    /// Elements with norm in `1..=max_norm`, grouped by norm.
    fn elements_by_norm(&self, max_norm: u64) -> HashMap<u64, Vec<(i64, i64)>> {
        let disc = (-self.discriminant()) as f64;
        // norm = (a + b·t/2)² + b²·|disc|/4
        let b_max = ((4.0 * max_norm as f64 / disc).sqrt()).floor() as i64 + 1;
        let mut out: HashMap<u64, Vec<(i64, i64)>> = HashMap::new();
        for b in -b_max..=b_max {
            let centre = -(b as f64) * self.trace as f64 / 2.0;
            let spread = (max_norm as f64).sqrt() + 1.0;
            let lo = (centre - spread).floor() as i64;
            let hi = (centre + spread).ceil() as i64;
            for a in lo..=hi {
                let n = self.element_norm(a, b);
                if n >= 1 && n as u64 <= max_norm {
                    out.entry(n as u64).or_default().push((a, b));
                }
            }
        }
        out
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Irreducible elements `a + bα` as `(a, b)` pairs.
pub type Elements = Vec<(i64, i64)>;

/// Irreducible elements `x ∈ Z[α]` with `|x| ≤ radius`, as points of the
/// complex plane. Returns the set and the elements as `(a, b)` coefficient pairs.
///
/// `x` is irreducible iff it is neither zero nor a unit and no element of norm
/// in `[2, N(x)/2]` divides it.
pub fn gen_quadratic_irreducibles<S: Scalar>(
    alpha: QuadraticInteger,
    radius: f64,
) -> Result<(PointSet<S>, Elements)> {
    let max_norm = floor_sq(radius);
    if max_norm > QUADRATIC_NORM_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "norm bound {max_norm} exceeds {QUADRATIC_NORM_BUDGET}"
        )));
    }
    let by_norm = alpha.elements_by_norm(max_norm);
    let mut norms: Vec<u64> = by_norm.keys().copied().filter(|&n| n >= 2).collect();
    norms.sort_unstable();

    let mut found = Vec::new();
    for n in norms {
        let proper: Vec<u64> = divisors(n).into_iter().filter(|&m| m >= 2 && 2 * m <= n).collect();
        for &x in &by_norm[&n] {
            let reducible = proper.iter().any(|m| {
                by_norm.get(m).is_some_and(|ys| ys.iter().any(|&y| alpha.divides(y, x)))
            });
            if !reducible {
                found.push(x);
            }
        }
    }
    let flat: Vec<S> = found
        .iter()
        .flat_map(|&(a, b)| {
            let (re, im) = alpha.embed(a, b);
            [S::of(re), S::of(im)]
        })
        .collect();
    let (set, _) = PointSet::from_flat(2, flat, Metric::Euclidean)?;
    let set = set.with_sample_radius(S::of(radius.max(0.0)))?;
    Ok((set, found))
}
