//! Radius ladders.

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// `R_j = start · ratio^j` for `j = 0..rungs`.
pub fn geometric_ladder<S: Scalar>(start: f64, ratio: f64, rungs: usize) -> Result<Vec<S>> {
    if !(start > 0.0) || !start.is_finite() {
        return Err(invalid("ladder start must be positive"));
    }
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(invalid("ladder ratio must exceed 1"));
    }
    Ok((0..rungs).map(|j| S::of(start * ratio.powi(j as i32))).collect())
}

/// `R_j = start · 2^j` up to and including `end`.
pub fn dyadic_ladder<S: Scalar>(start: f64, end: f64) -> Result<Vec<S>> {
    if !(end >= start) {
        return Err(invalid("ladder end must be at least its start"));
    }
    let rungs = ((end / start).log2() * (1.0 + 1e-12)).floor() as usize + 1;
    geometric_ladder(start, 2.0, rungs)
}

/// Decreasing ladder `r_j = start · 2^{-j}` down to and including `floor`,
/// for small-scale estimates.
pub fn dyadic_down_ladder<S: Scalar>(start: f64, floor: f64) -> Result<Vec<S>> {
    if !(floor > 0.0) || !(start >= floor) {
        return Err(invalid("need 0 < floor ≤ start"));
    }
    let rungs = ((start / floor).log2() * (1.0 + 1e-12)).floor() as usize + 1;
    Ok((0..rungs).map(|j| S::of(start * 0.5f64.powi(j as i32))).collect())
}

/// Checks a ladder is positive and strictly increasing with at least `min_len` rungs.
pub(crate) fn check_increasing<S: Scalar>(ladder: &[S], min_len: usize) -> Result<()> {
    if ladder.len() < min_len {
        return Err(invalid(format!("ladder needs at least {min_len} rungs, got {}", ladder.len())));
    }
    if !ladder.iter().all(|r| *r > S::zero() && r.is_finite()) {
        return Err(invalid("ladder radii must be positive and finite"));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("ladder must be strictly increasing"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_endpoints() {
        let l: Vec<f64> = dyadic_ladder(16.0, 1048576.0).unwrap();
        assert_eq!(l.len(), 17);
        assert_eq!(l[0], 16.0);
        assert_eq!(*l.last().unwrap(), 1048576.0);
        assert!(check_increasing(&l, 4).is_ok());
    }

    #[test]
    fn down_ladder() {
        let l: Vec<f64> = dyadic_down_ladder(0.5, 1.0 / 256.0).unwrap();
        assert_eq!(l, vec![0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625]);
    }

    #[test]
    fn rejects_bad_ladders() {
        assert!(geometric_ladder::<f64>(1.0, 1.0, 5).is_err());
        assert!(check_increasing(&[1.0, 2.0, 2.0, 3.0], 4).is_err());
        assert!(check_increasing(&[1.0, 2.0, 3.0], 4).is_err());
    }
}
