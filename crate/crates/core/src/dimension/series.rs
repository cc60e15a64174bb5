//! Zeta-series partial sums, abscissa of convergence and the Abel identity.

use rayon::prelude::*;

use super::ladder::check_increasing;
use crate::error::{invalid, Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// Growth slope at or below which a partial-sum sequence counts as convergent.
pub const DIVERGENCE_TAU: f64 = 0.05;
/// Rungs used for the partial-sum growth slope.
pub const SERIES_WINDOW: usize = 3;
/// Decades the ladder of an abscissa estimate must span.
pub const ABSCISSA_MIN_DECADES: f64 = 3.0;

const CHUNK: usize = 1 << 16;
const BISECTION_STEPS: usize = 40;

/// Sorted log-distances from a center, cut at the ladder radii.
#[derive(Clone, Debug)]
pub struct SeriesTerms {
    log_dist: Vec<f64>,
    rung_ends: Vec<usize>,
    radii: Vec<f64>,
}

impl SeriesTerms {
    /// Distances `0 < d(v, center) ≤ R_max`, grouped by rung.
    pub fn new<S: Scalar>(set: &PointSet<S>, center: &[S], ladder: &[S]) -> Result<Self> {
        check_increasing(ladder, 2)?;
        let r_max = *ladder.last().expect("nonempty ladder");
        let metric = set.metric();
        let mut dist: Vec<f64> = set
            .ball_points(center, r_max)?
            .into_par_iter()
            .map(|p| metric.dist(p, center).as_f64())
            .filter(|&d| d > 0.0)
            .collect();
        dist.par_sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distance"));
        let rung_ends = ladder
            .iter()
            .map(|r| dist.partition_point(|&d| d <= r.as_f64()))
            .collect();
        let log_dist = dist.into_par_iter().map(f64::ln).collect();
        Ok(SeriesTerms { log_dist, rung_ends, radii: ladder.iter().map(|r| r.as_f64()).collect() })
    }

    pub fn len(&self) -> usize {
        self.log_dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_dist.is_empty()
    }

    /// `S_j = Σ_{0 < d ≤ R_j} d^{−σ}` for every rung.
    pub fn partial_sums(&self, sigma: f64) -> Vec<f64> {
        let last = *self.rung_ends.last().unwrap_or(&0);
        let rung_of = |i: usize| self.rung_ends.partition_point(|&e| e <= i);
        let pieces: Vec<Vec<(usize, f64)>> = self.log_dist[..last]
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let mut out: Vec<(usize, f64)> = Vec::new();
                for (k, &ld) in chunk.iter().enumerate() {
                    let rung = rung_of(c * CHUNK + k);
                    let term = (-sigma * ld).exp();
                    match out.last_mut() {
                        Some((r, s)) if *r == rung => *s += term,
                        _ => out.push((rung, term)),
                    }
                }
                out
            })
            .collect();
        let mut per_rung = vec![0.0; self.rung_ends.len()];
        for (rung, s) in pieces.into_iter().flatten() {
            per_rung[rung] += s;
        }
        let mut acc = 0.0;
        per_rung
            .into_iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }

    /// Log-log slope of the partial sums over the last `SERIES_WINDOW` rungs.
    pub fn growth_slope(&self, sums: &[f64]) -> Result<f64> {
        let n = sums.len();
        let w = SERIES_WINDOW.min(n - 1);
        let (a, b) = (sums[n - 1 - w], sums[n - 1]);
        if b <= 0.0 {
            return Err(Error::EmptySet);
        }
        if a <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok((b.ln() - a.ln()) / (self.radii[n - 1].ln() - self.radii[n - 1 - w].ln()))
    }

    pub fn profile(&self, sigma: f64) -> Result<SeriesProfile> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(invalid("sigma must be nonnegative"));
        }
        let sums = self.partial_sums(sigma);
        let growth_slope = self.growth_slope(&sums)?;
        Ok(SeriesProfile {
            sigma,
            partial_sums: self.radii.iter().copied().zip(sums).collect(),
            growth_slope,
        })
    }
}

/// Partial sums of `Σ d(v, α)^{−σ}` along a ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesProfile {
    pub sigma: f64,
    pub partial_sums: Vec<(f64, f64)>,
    pub growth_slope: f64,
}

pub fn zeta_partial_sums<S: Scalar>(set: &PointSet<S>, center: &[S], sigma: f64, ladder: &[S]) -> Result<SeriesProfile> {
    SeriesTerms::new(set, center, ladder)?.profile(sigma)
}

/// Estimated abscissa of convergence.
#[derive(Clone, Debug, PartialEq)]
pub struct Abscissa {
    pub value: f64,
    /// Every grid value looked divergent; `value` is the grid maximum.
    pub saturated: bool,
    pub tau: f64,
    /// `(σ, growth slope)` for each grid value.
    pub grid_slopes: Vec<(f64, f64)>,
}

/// Smallest `σ` whose partial sums stop growing (slope `≤ τ`), refined by
/// bisection between neighbouring grid values.
pub fn abscissa_estimate<S: Scalar>(
    set: &PointSet<S>,
    center: &[S],
    sigma_grid: &[f64],
    ladder: &[S],
) -> Result<Abscissa> {
    abscissa_with_tau(set, center, sigma_grid, ladder, DIVERGENCE_TAU)
}

pub fn abscissa_with_tau<S: Scalar>(
    set: &PointSet<S>,
    center: &[S],
    sigma_grid: &[f64],
    ladder: &[S],
    tau: f64,
) -> Result<Abscissa> {
    if sigma_grid.is_empty()
        || sigma_grid[0] < 0.0
        || sigma_grid.windows(2).any(|w| w[1] <= w[0])
        || sigma_grid.iter().any(|s| !s.is_finite())
    {
        return Err(invalid("sigma grid must be nonnegative and strictly increasing"));
    }
    check_increasing(ladder, 2)?;
    let span = (ladder[ladder.len() - 1].as_f64() / ladder[0].as_f64()).log10();
    if span < ABSCISSA_MIN_DECADES - 1e-9 {
        return Err(invalid(format!("ladder spans {span:.2} decades, need {ABSCISSA_MIN_DECADES}")));
    }
    let terms = SeriesTerms::new(set, center, ladder)?;
    if terms.is_empty() {
        return Ok(Abscissa {
            value: sigma_grid[0],
            saturated: false,
            tau,
            grid_slopes: sigma_grid.iter().map(|&s| (s, 0.0)).collect(),
        });
    }
    let slope = |s: f64| terms.growth_slope(&terms.partial_sums(s));
    let grid_slopes = sigma_grid
        .iter()
        .map(|&s| Ok((s, slope(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let Some(i) = grid_slopes.iter().position(|&(_, g)| g <= tau) else {
        return Ok(Abscissa { value: *sigma_grid.last().expect("nonempty"), saturated: true, tau, grid_slopes });
    };
    if i == 0 {
        return Ok(Abscissa { value: sigma_grid[0], saturated: false, tau, grid_slopes });
    }
    let (mut lo, mut hi) = (sigma_grid[i - 1], sigma_grid[i]);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if slope(mid)? <= tau {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    Ok(Abscissa { value: hi, saturated: false, tau, grid_slopes })
}

/// `{lo, lo + step, …}` up to and including `hi`.
pub fn sigma_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

/// Distance levels `ℓ_j`, multiplicities `r(j)` and cumulative counts `M(ℓ_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelProfile {
    pub levels: Vec<f64>,
    pub multiplicities: Vec<u64>,
    pub cumulative: Vec<u64>,
}

impl AbelProfile {
    /// `M(ℓ)`: number of points with `0 < d ≤ ℓ`.
    pub fn m_at(&self, ell: f64) -> u64 {
        let k = self.levels.partition_point(|&l| l <= ell);
        if k == 0 {
            0
        } else {
            self.cumulative[k - 1]
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbelCheck {
    pub direct: f64,
    pub abel: f64,
    pub profile: AbelProfile,
}

impl AbelCheck {
    pub fn relative_difference(&self) -> f64 {
        (self.direct - self.abel).abs() / self.direct.abs().max(f64::MIN_POSITIVE)
    }
}

/// Compares `Σ_{0<d(α,v)≤ℓ} d^{−σ}` with its partial-summation form
/// `M(ℓ_m) ℓ_m^{−σ} + σ ∫_{ℓ_0}^{ℓ_m} M(t) t^{−σ−1} dt`, where the integral is
/// evaluated exactly on each interval of constancy of `M`.
pub fn abel_check<S: Scalar>(set: &PointSet<S>, center: &[S], sigma: f64, ell: f64) -> Result<AbelCheck> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid("sigma must be positive"));
    }
    let metric = set.metric();
    let mut dist: Vec<f64> = set
        .ball_points(center, S::of(ell))?
        .into_iter()
        .map(|p| metric.dist(p, center).as_f64())
        .filter(|&d| d > 0.0 && d <= ell)
        .collect();
    if dist.is_empty() {
        return Err(Error::EmptySet);
    }
    dist.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distance"));
    let mut levels: Vec<f64> = Vec::new();
    let mut multiplicities: Vec<u64> = Vec::new();
    for d in dist {
        if levels.last() == Some(&d) {
            *multiplicities.last_mut().expect("paired with levels") += 1;
        } else {
            levels.push(d);
            multiplicities.push(1);
        }
    }
    let cumulative: Vec<u64> = multiplicities
        .iter()
        .scan(0u64, |acc, &r| {
            *acc += r;
            Some(*acc)
        })
        .collect();
    let pow: Vec<f64> = levels.iter().map(|l| l.powf(-sigma)).collect();
    let direct: f64 = multiplicities.iter().zip(&pow).map(|(&r, &p)| r as f64 * p).sum();
    let m = levels.len() - 1;
    // σ ∫_{ℓ_j}^{ℓ_{j+1}} M_j t^{−σ−1} dt = M_j (ℓ_j^{−σ} − ℓ_{j+1}^{−σ})
    let integral: f64 = (0..m).map(|j| cumulative[j] as f64 * (pow[j] - pow[j + 1])).sum();
    let abel = cumulative[m] as f64 * pow[m] + integral;
    Ok(AbelCheck { direct, abel, profile: AbelProfile { levels, multiplicities, cumulative } })
}
