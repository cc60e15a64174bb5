//! Arithmetic patches and the `(k, ε, e)` approximation test.

use crate::error::{invalid, Error, Result};
use crate::geometry::{lex_cmp, Metric, Point};
use crate::scalar::Scalar;

/// Tolerance on unit length and pairwise orthogonality of orientation vectors.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Largest patch size `k^m` accepted.
pub const MAX_PATCH_POINTS: u64 = 1 << 24;

/// `P = {t + Δ Σ x_i e_i : x_i = 0..k−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArithmeticPatch<S> {
    pub t: Point<S>,
    pub delta: S,
    pub orientation: Vec<Vec<S>>,
    pub k: usize,
}

/// Checks `vectors` are `m ≤ d` orthonormal vectors in `R^d`.
pub fn check_orientation<S: Scalar>(vectors: &[Vec<S>], d: usize) -> Result<()> {
    let m = vectors.len();
    if m == 0 || m > d {
        return Err(invalid(format!("orientation needs between 1 and {d} vectors, got {m}")));
    }
    let dot = |a: &[S], b: &[S]| a.iter().zip(b).map(|(x, y)| x.as_f64() * y.as_f64()).sum::<f64>();
    for (i, e) in vectors.iter().enumerate() {
        if e.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: e.len() });
        }
        if (dot(e, e).sqrt() - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(invalid(format!("orientation vector {} is not a unit vector", i + 1)));
        }
        for (j, f) in vectors[..i].iter().enumerate() {
            if dot(e, f).abs() > ORTHONORMAL_TOL {
                return Err(invalid(format!("orientation vectors {} and {} are not orthogonal", j + 1, i + 1)));
            }
        }
    }
    Ok(())
}

/// The first `m` standard basis vectors of `R^d`.
pub fn standard_orientation<S: Scalar>(d: usize, m: usize) -> Vec<Vec<S>> {
    (0..m)
        .map(|i| (0..d).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

/// `k^m`, or an error when it exceeds [`MAX_PATCH_POINTS`].
pub fn patch_size(k: usize, m: usize) -> Result<usize> {
    (k as u64)
        .checked_pow(m as u32)
        .filter(|&n| n <= MAX_PATCH_POINTS)
        .map(|n| n as usize)
        .ok_or_else(|| Error::BudgetExceeded(format!("patch of {k}^{m} points")))
}

impl<S: Scalar> ArithmeticPatch<S> {
    pub fn new(t: Point<S>, delta: S, orientation: Vec<Vec<S>>, k: usize) -> Result<Self> {
        if !(delta > S::zero()) || !delta.is_finite() {
            return Err(invalid("patch scale must be positive"));
        }
        if k < 2 {
            return Err(invalid("patch size k must be at least 2"));
        }
        check_orientation(&orientation, t.dim())?;
        patch_size(k, orientation.len())?;
        Ok(ArithmeticPatch { t, delta, orientation, k })
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn m(&self) -> usize {
        self.orientation.len()
    }

    /// `k^m`.
    pub fn size(&self) -> usize {
        patch_size(self.k, self.m()).expect("validated on construction")
    }

    /// Point with multi-index `x` (`x_1` first).
    pub fn point_at(&self, x: &[usize]) -> Vec<S> {
        let mut p = self.t.coords().to_vec();
        for (xi, e) in x.iter().zip(&self.orientation) {
            let s = self.delta * S::of_count(*xi as u64);
            for (c, ec) in p.iter_mut().zip(e) {
                *c += s * *ec;
            }
        }
        p
    }

    /// All `k^m` points, `x_1` varying fastest.
    pub fn points(&self) -> Vec<Vec<S>> {
        let m = self.m();
        let mut x = vec![0usize; m];
        let mut out = Vec::with_capacity(self.size());
        loop {
            out.push(self.point_at(&x));
            let mut i = 0;
            while i < m {
                x[i] += 1;
                if x[i] < self.k {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == m {
                return out;
            }
        }
    }
}

/// Points of the patch `t + Δ Σ x_i e_i`, `x_1` varying fastest.
pub fn make_patch<S: Scalar>(t: &[S], delta: S, orientation: &[Vec<S>], k: usize) -> Result<Vec<Point<S>>> {
    let patch = ArithmeticPatch::new(Point::new(t.to_vec())?, delta, orientation.to_vec(), k)?;
    patch.points().into_iter().map(Point::new).collect()
}

/// True iff `Q` has exactly `k^m` distinct points and every patch point has a
/// point of `Q` within `εΔ` (closed inequality).
pub fn verify_patch<S: Scalar>(q: &[&[S]], patch: &ArithmeticPatch<S>, epsilon: f64) -> bool {
    if q.iter().any(|p| p.len() != patch.dim()) {
        return false;
    }
    let mut distinct: Vec<&[S]> = q.to_vec();
    distinct.sort_by(|a, b| lex_cmp(a, b));
    distinct.dedup();
    if distinct.len() != patch.size() {
        return false;
    }
    let tol = S::of(epsilon) * patch.delta;
    patch
        .points()
        .iter()
        .all(|x| distinct.iter().any(|y| Metric::Euclidean.dist(x, y) <= tol))
}
