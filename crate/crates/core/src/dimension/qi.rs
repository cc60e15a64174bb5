//! Quasi-isometric images and the covering-number comparisons they satisfy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::profile::{counting_profile, zeta_estimates, DimensionEstimate};
use crate::covering::{covering_number, CoverBound, DEFAULT_ORACLE_CAP};
use crate::error::{invalid, Result};
use crate::geometry::{Metric, PointSet};
use crate::scalar::Scalar;

/// `x ↦ C·x + u(x)` with a seeded, deterministic perturbation `‖u(x)‖ ≤ K`.
///
/// Distances then satisfy `C d − 2K ≤ d' ≤ C d + 2K`, so the map is a
/// quasi-isometry with multiplicative constant `C` and additive constant `2K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiIsometry {
    pub scale: f64,
    pub perturbation: f64,
    pub seed: u64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl QuasiIsometry {
    pub fn new(scale: f64, perturbation: f64, seed: u64) -> Result<Self> {
        if !(scale >= 1.0) || !scale.is_finite() {
            return Err(invalid("scale C must be at least 1"));
        }
        if !(perturbation >= 0.0) || !perturbation.is_finite() {
            return Err(invalid("perturbation K must be nonnegative"));
        }
        Ok(QuasiIsometry { scale, perturbation, seed })
    }

    /// Additive constant of the quasi-isometry inequalities.
    pub fn additive(&self) -> f64 {
        2.0 * self.perturbation
    }

    pub fn apply<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        let mut h = mix(self.seed);
        for c in p {
            h = mix(h ^ c.as_f64().to_bits());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        let u: Vec<f64> = loop {
            let v: Vec<f64> = (0..p.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                break v;
            }
        };
        p.iter()
            .zip(u)
            .map(|(&c, u)| S::of(self.scale) * c + S::of(self.perturbation * u))
            .collect()
    }
}

/// Image of `S` under the map, kept only where it is complete: every image
/// point within `Cρ − K` of the origin comes from a point of norm `≤ ρ`.
pub fn qi_transform<S: Scalar>(set: &PointSet<S>, scale: f64, perturbation: f64, seed: u64) -> Result<PointSet<S>> {
    let qi = QuasiIsometry::new(scale, perturbation, seed)?;
    if *set.metric() != Metric::Euclidean {
        return Err(invalid("quasi-isometric images are built for Euclidean sets"));
    }
    let reach = S::of(scale) * set.sample_radius() - S::of(perturbation);
    if !(reach > S::zero()) {
        return Err(invalid("transformed sample would be empty: Cρ − K ≤ 0"));
    }
    let mut flat = Vec::with_capacity(set.len() * set.dim());
    for p in set.iter() {
        let q = qi.apply(p);
        if Metric::Euclidean.norm(&q) <= reach {
            flat.extend(q);
        }
    }
    let (image, _) = PointSet::from_flat(set.dim(), flat, Metric::Euclidean)?;
    image.with_sample_radius(reach)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequalityStatus {
    /// `lhs.upper ≤ rhs.lower`.
    Certified,
    /// The brackets overlap, so the inequality cannot be decided.
    Consistent,
    /// `lhs.lower > rhs.upper`.
    Violated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QiRow {
    /// Radius of the left-hand ball.
    pub radius: f64,
    pub lhs: CoverBound,
    pub rhs: CoverBound,
    pub status: InequalityStatus,
}

fn compare(radius: f64, lhs: CoverBound, rhs: CoverBound) -> QiRow {
    let status = if lhs.upper <= rhs.lower {
        InequalityStatus::Certified
    } else if lhs.lower > rhs.upper {
        InequalityStatus::Violated
    } else {
        InequalityStatus::Consistent
    };
    QiRow { radius, lhs, rhs, status }
}

#[derive(Clone, Debug)]
pub struct QiReport {
    pub map: QuasiIsometry,
    /// `N(B(α,R)∩X, r) ≤ N(B(f(α), CR+K')∩f(X), r/C − K')`.
    pub forward: Vec<QiRow>,
    /// `N(B(f(α),R)∩f(X), r) ≤ N(B(α, C(R+K'))∩X, (r − K')/C)`.
    pub backward: Vec<QiRow>,
    pub notes: Vec<String>,
    pub original: DimensionEstimate,
    pub transformed: DimensionEstimate,
}

impl QiReport {
    pub fn violations(&self) -> usize {
        self.forward.iter().chain(&self.backward).filter(|r| r.status == InequalityStatus::Violated).count()
    }

    pub fn all_certified(&self) -> bool {
        self.forward.iter().chain(&self.backward).all(|r| r.status == InequalityStatus::Certified)
    }

    pub fn upper_difference(&self) -> f64 {
        (self.original.upper - self.transformed.upper).abs()
    }
}

/// Checks both covering comparisons on every rung of `ladder` and compares
/// zeta estimates of `X` (ladder `R_j`) and `f(X)` (ladder `C·R_j`), both at
/// cover scale `r`.
#[allow(clippy::too_many_arguments)]
pub fn qi_invariance_check<S: Scalar>(
    original: &PointSet<S>,
    transformed: &PointSet<S>,
    map: &QuasiIsometry,
    center: &[S],
    r: f64,
    ladder: &[S],
    window: usize,
) -> Result<QiReport> {
    let c = map.scale;
    let k = map.additive();
    let f_center = map.apply(center);
    let f_reach = transformed.usable_radius(&f_center).as_f64();
    let x_reach = original.usable_radius(center).as_f64();
    let cap = DEFAULT_ORACLE_CAP;
    let mut notes = Vec::new();
    let mut forward = Vec::new();
    let mut backward = Vec::new();

    let forward_scale = r / c - k;
    if forward_scale <= 0.0 {
        notes.push(format!("forward comparison skipped: r/C − K' = {forward_scale} ≤ 0"));
    }
    let backward_scale = (r - k) / c;
    if backward_scale <= 0.0 {
        notes.push(format!("backward comparison skipped: (r − K')/C = {backward_scale} ≤ 0"));
    }
    for &big in ladder {
        let big = big.as_f64();
        if forward_scale > 0.0 {
            let image_radius = c * big + k;
            if big > x_reach || image_radius > f_reach {
                notes.push(format!("forward comparison at R = {big} skipped: outside the samples"));
            } else {
                let lhs = covering_number(original, center, S::of(big), S::of(r), cap)?;
                let rhs = covering_number(transformed, &f_center, S::of(image_radius), S::of(forward_scale), cap)?;
                forward.push(compare(big, lhs, rhs));
            }
        }
        let f_radius = big / c - k;
        if backward_scale > 0.0 && f_radius > 0.0 {
            if big > x_reach || f_radius > f_reach {
                notes.push(format!("backward comparison at R = {f_radius} skipped: outside the samples"));
            } else {
                let lhs = covering_number(transformed, &f_center, S::of(f_radius), S::of(r), cap)?;
                let rhs = covering_number(original, center, S::of(big), S::of(backward_scale), cap)?;
                backward.push(compare(f_radius, lhs, rhs));
            }
        }
    }
    let scaled: Vec<S> = ladder.iter().map(|&x| x * S::of(c)).collect();
    let original_est = zeta_estimates(&counting_profile(original, center, S::of(r), ladder)?, window)?;
    let transformed_est = zeta_estimates(&counting_profile(transformed, &f_center, S::of(r), &scaled)?, window)?;
    Ok(QiReport {
        map: *map,
        forward,
        backward,
        notes,
        original: original_est,
        transformed: transformed_est,
    })
}
