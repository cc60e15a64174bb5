use crate::error::{invalid, Error, Result};
use crate::geometry::{ExactCounter, Metric, PointSet};
use crate::scalar::Scalar;

/// Materialization cap for lattice samples.
pub const LATTICE_POINT_BUDGET: u64 = 20_000_000;

/// `⌊R²⌋` with a relative guard so radii such as `√10` keep their boundary points.
pub(crate) fn floor_sq(r: f64) -> u64 {
    if r <= 0.0 {
        return 0;
    }
    (r * r * (1.0 + 1e-12)).floor() as u64
}

/// `|{x ∈ Z^d : |x|² ≤ n2}|` by exact enumeration over the first `d - 1` axes.
pub fn lattice_count(d: usize, n2: u64) -> u64 {
    let m = n2.isqrt() as i64;
    match d {
        1 => 2 * m as u64 + 1,
        2 => (-m..=m)
            .map(|x| 2 * (n2 - (x * x) as u64).isqrt() + 1)
            .sum(),
        3 => (-m..=m)
            .map(|x| lattice_count(2, n2 - (x * x) as u64))
            .sum(),
        _ => panic!("lattice_count supports d in 1..=3"),
    }
}

/// Integer points of `Z^d` in the closed ball `B(0, R)`, with an exact counter.
pub fn gen_lattice<S: Scalar>(d: usize, radius: f64) -> Result<PointSet<S>> {
    if !(1..=3).contains(&d) {
        return Err(invalid("lattice dimension must be 1, 2 or 3"));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(invalid("lattice radius must be finite and nonnegative"));
    }
    let n2 = floor_sq(radius);
    let expected = lattice_count(d, n2);
    if expected > LATTICE_POINT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "Z^{d} ball of radius {radius} has {expected} points (budget {LATTICE_POINT_BUDGET})"
        )));
    }
    let m = n2.isqrt() as i64;
    let mut flat = Vec::with_capacity(expected as usize * d);
    match d {
        1 => {
            for x in -m..=m {
                flat.push(S::of(x as f64));
            }
        }
        2 => {
            for x in -m..=m {
                let h = (n2 - (x * x) as u64).isqrt() as i64;
                for y in -h..=h {
                    flat.extend([S::of(x as f64), S::of(y as f64)]);
                }
            }
        }
        _ => {
            for x in -m..=m {
                let rx = n2 - (x * x) as u64;
                let my = rx.isqrt() as i64;
                for y in -my..=my {
                    let h = (rx - (y * y) as u64).isqrt() as i64;
                    for z in -h..=h {
                        flat.extend([S::of(x as f64), S::of(y as f64), S::of(z as f64)]);
                    }
                }
            }
        }
    }
    let (set, _) = PointSet::from_flat(d, flat, Metric::Euclidean)?;
    // counting cost grows like R^(d-1)
    let counter_limit = match d {
        1 => 1e15,
        2 => 1e7,
        _ => 1e4,
    };
    Ok(set
        .with_sample_radius(S::of(radius))?
        .with_counter(ExactCounter::new(counter_limit, move |r| lattice_count(d, floor_sq(r))))
        .with_known_gap(S::one()))
}
