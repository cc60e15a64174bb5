use std::sync::Arc;

use super::sieve::{SieveCache, DEFAULT_SIEVE_BUDGET};
use crate::error::Result;
use crate::geometry::{ExactCounter, Metric, PointSet};
use crate::scalar::Scalar;

fn line_set<S: Scalar>(values: &[u64], limit: u64) -> Result<PointSet<S>> {
    let flat: Vec<S> = values.iter().map(|&v| S::of(v as f64)).collect();
    let (set, _) = PointSet::from_flat(1, flat, Metric::Euclidean)?;
    set.with_sample_radius(S::of(limit as f64))
}

/// Primes `≤ limit` on the real line; the counter is `π`.
pub fn gen_primes<S: Scalar>(limit: u64) -> Result<PointSet<S>> {
    let sieve = Arc::new(SieveCache::with_budget(limit, DEFAULT_SIEVE_BUDGET)?);
    primes_from_sieve(sieve)
}

/// Primes of an existing sieve as a point set.
pub fn primes_from_sieve<S: Scalar>(sieve: Arc<SieveCache>) -> Result<PointSet<S>> {
    let limit = sieve.limit();
    let set = line_set(sieve.primes(), limit)?;
    Ok(set
        .with_counter(ExactCounter::new(limit as f64, move |r| sieve.pi(r.floor() as u64)))
        .with_known_gap(S::one()))
}

/// Super primes `p(p(n)) ≤ limit`; the counter is `π(π(N))`.
pub fn gen_super_primes<S: Scalar>(limit: u64) -> Result<PointSet<S>> {
    let sieve = Arc::new(SieveCache::with_budget(limit, DEFAULT_SIEVE_BUDGET)?);
    super_primes_from_sieve(sieve)
}

/// Super primes of an existing sieve as a point set.
pub fn super_primes_from_sieve<S: Scalar>(sieve: Arc<SieveCache>) -> Result<PointSet<S>> {
    let limit = sieve.limit();
    let values = super_prime_values(&sieve);
    let set = line_set(&values, limit)?;
    let gap = if values.len() >= 2 { S::of(2.0) } else { S::one() };
    Ok(set
        .with_counter(ExactCounter::new(limit as f64, move |r| sieve.pi(sieve.pi(r.floor() as u64))))
        .with_known_gap(gap))
}

/// `{p(m) : m prime, p(m) ≤ limit}` in increasing order.
pub fn super_prime_values(sieve: &SieveCache) -> Vec<u64> {
    let primes = sieve.primes();
    primes
        .iter()
        .take_while(|&&m| (m as usize) <= primes.len())
        .map(|&m| primes[m as usize - 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_to_100() {
        let p = gen_primes::<f64>(100).unwrap();
        assert_eq!(p.len(), 25);
        assert_eq!(p.ball_count(&[0.0], 100.0).unwrap(), 25);
        assert_eq!(p.counter().unwrap().count(100.0), Some(25));
    }

    #[test]
    fn super_primes_to_100() {
        let q = gen_super_primes::<f64>(100).unwrap();
        let got: Vec<f64> = q.iter().map(|p| p[0]).collect();
        assert_eq!(got, vec![3.0, 5.0, 11.0, 17.0, 31.0, 41.0, 59.0, 67.0, 83.0]);
        assert_eq!(q.counter().unwrap().count(100.0), Some(9));
    }

    #[test]
    fn super_primes_to_2_is_empty() {
        assert!(gen_super_primes::<f64>(2).unwrap().is_empty());
        assert_eq!(gen_super_primes::<f64>(3).unwrap().len(), 1);
    }

    #[test]
    fn super_primes_are_primes() {
        let sieve = SieveCache::new(50_000);
        for q in super_prime_values(&sieve) {
            assert!(sieve.is_prime(q));
        }
    }

    #[test]
    fn counter_matches_materialized() {
        let sieve = Arc::new(SieveCache::new(20_000));
        let q: PointSet<f64> = super_primes_from_sieve(sieve.clone()).unwrap();
        for r in [0.0, 2.0, 3.0, 1000.0, 19_999.5, 20_000.0] {
            let m = q.norms().iter().filter(|&&n| n <= r).count() as u64;
            assert_eq!(q.counter().unwrap().count(r).unwrap(), m);
        }
    }
}
