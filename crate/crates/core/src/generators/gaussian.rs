use std::sync::Arc;

use super::lattice::floor_sq;
use super::sieve::{SieveCache, DEFAULT_SIEVE_BUDGET};
use crate::error::{invalid, Result};
use crate::geometry::{ExactCounter, Metric, PointSet};
use crate::scalar::Scalar;

/// Classes of irreducible Gaussian integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussianClass {
    /// The four associates of `1 + i`.
    P1,
    /// Associates of rational primes `≡ 3 (mod 4)`.
    P2,
    /// Elements whose norm is a rational prime `≡ 1 (mod 4)`.
    P3,
}

/// An irreducible `re + im·i` tagged with its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussianIrreducible {
    pub class: GaussianClass,
    pub re: i64,
    pub im: i64,
}

impl GaussianIrreducible {
    pub fn norm(&self) -> u64 {
        (self.re * self.re + self.im * self.im) as u64
    }

    /// Checks the defining property of the tagged class.
    pub fn class_is_consistent(&self, sieve: &SieveCache) -> bool {
        let n = self.norm();
        match self.class {
            GaussianClass::P1 => self.re.abs() == 1 && self.im.abs() == 1,
            GaussianClass::P2 => {
                let p = self.re.unsigned_abs().max(self.im.unsigned_abs());
                (self.re == 0 || self.im == 0) && p % 4 == 3 && sieve.is_prime(p)
            }
            GaussianClass::P3 => n % 4 == 1 && sieve.is_prime(n),
        }
    }
}

/// Irreducible elements of `Z[i]` with their class tags.
#[derive(Clone, Debug)]
pub struct GaussianIrreducibles<S> {
    pub set: PointSet<S>,
    pub members: Vec<GaussianIrreducible>,
}

/// Writes `p = a² + b²` with `0 < b < a` for a prime `p ≡ 1 (mod 4)`.
pub fn two_squares(p: u64) -> Option<(u64, u64)> {
    let mut b = 1u64;
    while 2 * b * b < p {
        let rest = p - b * b;
        let a = rest.isqrt();
        if a * a == rest {
            return Some((a, b));
        }
        b += 1;
    }
    None
}

fn associates(a: i64, b: i64) -> [(i64, i64); 4] {
    // multiplication by the units 1, i, -1, -i
    [(a, b), (-b, a), (-a, -b), (b, -a)]
}

/// All irreducibles of `Z[i]` with modulus `≤ radius`.
pub fn gen_gaussian_irreducibles<S: Scalar>(radius: f64) -> Result<GaussianIrreducibles<S>> {
    gen_gaussian_irreducibles_counted(radius, radius)
}

/// Irreducibles with modulus `≤ materialize_radius`, plus an exact counter
/// valid up to `count_radius ≥ materialize_radius` (sieving to `count_radius²`).
pub fn gen_gaussian_irreducibles_counted<S: Scalar>(
    materialize_radius: f64,
    count_radius: f64,
) -> Result<GaussianIrreducibles<S>> {
    if !(materialize_radius >= 0.0) || count_radius < materialize_radius {
        return Err(invalid("need 0 ≤ materialize radius ≤ count radius"));
    }
    let norm_limit = floor_sq(count_radius);
    let sieve = Arc::new(SieveCache::with_budget(norm_limit, DEFAULT_SIEVE_BUDGET)?);
    let mat_norm = floor_sq(materialize_radius);

    let mut members = Vec::new();
    if mat_norm >= 2 {
        for (a, b) in associates(1, 1) {
            members.push(GaussianIrreducible { class: GaussianClass::P1, re: a, im: b });
        }
    }
    for &p in sieve.primes().iter().take_while(|&&p| p <= mat_norm) {
        if p % 4 == 3 && p * p <= mat_norm {
            for (a, b) in associates(p as i64, 0) {
                members.push(GaussianIrreducible { class: GaussianClass::P2, re: a, im: b });
            }
        } else if p % 4 == 1 {
            let (a, b) = two_squares(p).expect("Fermat: p ≡ 1 (mod 4) is a sum of two squares");
            for (x, y) in associates(a as i64, b as i64).into_iter().chain(associates(b as i64, a as i64)) {
                members.push(GaussianIrreducible { class: GaussianClass::P3, re: x, im: y });
            }
        }
    }

    let flat: Vec<S> = members.iter().flat_map(|g| [S::of(g.re as f64), S::of(g.im as f64)]).collect();
    let (set, _) = PointSet::from_flat(2, flat, Metric::Euclidean)?;

    let split = Arc::new(ResidueSplit::new(&sieve));
    let counter = ExactCounter::new(count_radius, move |r| {
        let n2 = floor_sq(r);
        let p1 = if n2 >= 2 { 4 } else { 0 };
        p1 + 4 * split.count_3mod4(n2.isqrt()) + 8 * split.count_1mod4(n2)
    });
    let set = set
        .with_sample_radius(S::of(materialize_radius))?
        .with_counter(counter)
        .with_known_gap(S::one());
    Ok(GaussianIrreducibles { set, members })
}

/// Primes split by residue mod 4 for counting.
#[derive(Debug)]
struct ResidueSplit {
    one: Vec<u64>,
    three: Vec<u64>,
}

impl ResidueSplit {
    fn new(sieve: &SieveCache) -> Self {
        let (one, three): (Vec<u64>, Vec<u64>) =
            sieve.primes().iter().filter(|&&p| p != 2).partition(|&&p| p % 4 == 1);
        ResidueSplit { one, three }
    }

    fn count_1mod4(&self, n: u64) -> u64 {
        self.one.partition_point(|&p| p <= n) as u64
    }

    fn count_3mod4(&self, n: u64) -> u64 {
        self.three.partition_point(|&p| p <= n) as u64
    }
}
