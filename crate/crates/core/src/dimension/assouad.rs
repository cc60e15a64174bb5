//! Empirical Assouad-dimension certificates.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covering::{covering_number, DEFAULT_ORACLE_CAP};
use crate::error::{invalid, Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// Smallest accepted `R / r`.
pub const DEFAULT_RHO_MIN: f64 = 4.0;

/// How `(x, R, r)` triples are drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct AssouadConfig {
    /// Number of sampled centers `x ∈ S`.
    pub centers: usize,
    /// Outer radii `R`; empty means `ρ/2, ρ/4, …, ρ/64` for sample radius `ρ`.
    pub radii: Vec<f64>,
    /// Scale ratios `R / r`.
    pub ratios: Vec<f64>,
    pub rho_min: f64,
    pub seed: u64,
    pub oracle_cap: usize,
}

impl Default for AssouadConfig {
    fn default() -> Self {
        AssouadConfig {
            centers: 8,
            radii: Vec::new(),
            ratios: vec![4.0, 16.0, 64.0, 256.0, 1024.0],
            rho_min: DEFAULT_RHO_MIN,
            seed: 0,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadTriple {
    pub center: Vec<f64>,
    pub radius: f64,
    pub scale: f64,
    /// Lower bound on `N(B(x, R) ∩ S, r)`.
    pub lower: u64,
    /// `log N / log(R/r)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssouadCertificate {
    pub value: f64,
    pub triples: Vec<AssouadTriple>,
}

impl AssouadCertificate {
    pub fn best(&self) -> &AssouadTriple {
        self.triples
            .iter()
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .expect("a certificate has at least one triple")
    }
}

/// Largest `log N(B(x,R)∩S, r) / log(R/r)` over sampled triples, using
/// covering-number lower bounds. This is a finite-sample lower-style
/// certificate, not a convergent estimator.
pub fn assouad_certificate<S: Scalar>(set: &PointSet<S>, config: &AssouadConfig) -> Result<AssouadCertificate> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(config.rho_min > 1.0) {
        return Err(invalid("rho_min must exceed 1"));
    }
    let rho = set.sample_radius().as_f64();
    let radii: Vec<f64> = if config.radii.is_empty() {
        (1..=6).map(|i| rho / f64::from(1u32 << i)).filter(|&r| r > 0.0).collect()
    } else {
        config.radii.clone()
    };
    let ratios: Vec<f64> = config.ratios.iter().copied().filter(|&q| q >= config.rho_min).collect();
    let smallest = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let candidates: Vec<usize> = (0..set.len())
        .filter(|&i| set.usable_radius(set.point(i)).as_f64() >= smallest)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut picked: Vec<usize> = sample(&mut rng, candidates.len(), config.centers.min(candidates.len()))
        .into_iter()
        .map(|k| candidates[k])
        .collect();
    picked.sort_unstable();
    let mut work = Vec::new();
    for &i in &picked {
        let usable = set.usable_radius(set.point(i)).as_f64();
        for &big in radii.iter().filter(|&&r| r > 0.0 && r <= usable) {
            for &q in &ratios {
                work.push((i, big, big / q));
            }
        }
    }
    if work.is_empty() {
        return Err(invalid("no sampled triple satisfies R/r ≥ rho_min inside the sample"));
    }
    let triples = work
        .into_par_iter()
        .map(|(i, big, small)| {
            let x = set.point(i);
            let b = covering_number(set, x, S::of(big), S::of(small), config.oracle_cap)?;
            Ok(AssouadTriple {
                center: x.iter().map(|c| c.as_f64()).collect(),
                radius: big,
                scale: small,
                lower: b.lower,
                ratio: (b.lower.max(1) as f64).ln() / (big / small).ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = triples.iter().map(|t| t.ratio).fold(0.0, f64::max);
    Ok(AssouadCertificate { value, triples })
}
