use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default upper limit for sieving.
pub const DEFAULT_SIEVE_BUDGET: u64 = 100_000_000;

/// Odd numbers per segment (a segment covers twice this many integers).
const SEGMENT_ODDS: u64 = 1 << 17;

/// All primes up to `limit`, produced by a segmented sieve of Eratosthenes.
#[derive(Clone, Debug)]
pub struct SieveCache {
    limit: u64,
    primes: Vec<u64>,
}

impl SieveCache {
    /// Sieves up to `limit`, refusing limits above `budget`.
    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit > budget {
            return Err(Error::BudgetExceeded(format!("sieve limit {limit} exceeds budget {budget}")));
        }
        Ok(Self::new(limit))
    }

    pub fn new(limit: u64) -> Self {
        SieveCache { limit, primes: segmented_sieve(limit) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `π(n)`; `n` beyond the limit is clamped to it.
    pub fn pi(&self, n: u64) -> u64 {
        self.primes.partition_point(|&p| p <= n) as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} beyond sieve limit {}", self.limit);
        self.primes.binary_search(&n).is_ok()
    }

    /// The `n`-th prime, 1-based: `nth(1) = 2`.
    pub fn nth(&self, n: u64) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i as usize).copied())
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = limit.isqrt();
    let base: Vec<u64> = simple_sieve(root).into_iter().filter(|&p| p > 2).collect();
    // odd number 2k+1 lives at index k; index 0 (the number 1) is skipped
    let odd_count = (limit - 1) / 2 + 1;
    let segments = odd_count.div_ceil(SEGMENT_ODDS);
    let chunks: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT_ODDS;
            let hi = (lo + SEGMENT_ODDS).min(odd_count);
            let mut composite = vec![false; (hi - lo) as usize];
            for &p in &base {
                // first odd multiple of p that is ≥ p² and has index ≥ lo
                let start_num = (p * p).max((2 * lo + 1).div_ceil(p) * p);
                let start_num = if start_num % 2 == 0 { start_num + p } else { start_num };
                let mut k = (start_num - 1) / 2;
                while k < hi {
                    composite[(k - lo) as usize] = true;
                    k += p;
                }
            }
            composite
                .iter()
                .enumerate()
                .filter(|&(i, &c)| !c && lo + i as u64 > 0)
                .map(|(i, _)| 2 * (lo + i as u64) + 1)
                .collect()
        })
        .collect();
    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum::<usize>() + 1);
    primes.push(2);
    for c in chunks {
        primes.extend(c);
    }
    primes
}
