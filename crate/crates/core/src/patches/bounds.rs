//! Dimension thresholds above which patches are guaranteed, and the
//! empirical report that checks a set against them.

use std::fmt::Write as _;

use super::search::{find_patch, PatchQuery, PatchReport};
use crate::dimension::{abscissa_estimate, dyadic_ladder, sigma_grid, Abscissa, SeriesProfile, SeriesTerms, DIVERGENCE_TAU};
use crate::error::{invalid, Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// `⌈x⌉`, treating values within relative `1e-12` of an integer as that integer.
fn robust_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `d + log(1 − k^{−m}) / log(k ⌈√d / (2ε)⌉)`: a set of `R^d` whose Assouad
/// dimension exceeds this value contains `(k, ε, e)`-APs for every `m`
/// orthonormal vectors `e`, and so does one whose zeta series diverges at some
/// exponent above it.
pub fn threshold_bound(d: usize, m: usize, k: usize, epsilon: f64) -> Result<f64> {
    if k < 3 {
        return Err(invalid("threshold needs k ≥ 3"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("threshold needs 0 < epsilon < 1"));
    }
    if m < 1 || m > d {
        return Err(invalid(format!("threshold needs 1 ≤ m ≤ d, got m = {m}, d = {d}")));
    }
    let base = k as f64 * robust_ceil((d as f64).sqrt() / (2.0 * epsilon));
    if base <= 1.0 {
        return Err(Error::DegenerateLogBase(base));
    }
    let km = (k as f64).powi(m as i32);
    Ok(d as f64 + (-1.0 / km).ln_1p() / base.ln())
}

/// Offset above the threshold at which the series is probed.
pub const PROBE_OFFSET: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct GuaranteeConfig {
    /// Series ladder; defaults to dyadic radii from 1 to the sample radius.
    pub ladder: Option<Vec<f64>>,
    pub sigma_step: f64,
    pub probe_offset: f64,
    /// Patch search settings; `k`, `epsilon` and the orientation are overwritten.
    pub query: Option<PatchQuery>,
}

impl Default for GuaranteeConfig {
    fn default() -> Self {
        GuaranteeConfig { ladder: None, sigma_step: 0.05, probe_offset: PROBE_OFFSET, query: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GuaranteeReport<S> {
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub epsilon: f64,
    pub threshold: f64,
    pub probe: SeriesProfile,
    pub abscissa: Abscissa,
    /// The series looks divergent at the probe exponent.
    pub supported: bool,
    pub patch: PatchReport<S>,
}

impl<S: Scalar> GuaranteeReport<S> {
    pub fn summary(&self) -> String {
        let condition = if self.supported {
            "condition supported".to_string()
        } else if self.abscissa.value < self.threshold {
            format!(
                "condition not supported (abscissa {:.2} < threshold {:.2})",
                self.abscissa.value, self.threshold
            )
        } else {
            format!(
                "condition not supported (growth slope {:.3} ≤ {} at sigma {:.3})",
                self.probe.growth_slope, DIVERGENCE_TAU, self.probe.sigma
            )
        };
        let patch = if self.patch.found { "witness found" } else { "no witness found" };
        format!("{condition}; {patch}")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "threshold {:.6} (d={}, m={}, k={}, epsilon={})", self.threshold, self.d, self.m, self.k, self.epsilon);
        let _ = writeln!(
            w,
            "probe sigma {:.6}: growth slope {:.6} (tau {})",
            self.probe.sigma, self.probe.growth_slope, DIVERGENCE_TAU
        );
        for (r, s) in &self.probe.partial_sums {
            let _ = writeln!(w, "  R {r} partial sum {s:.9}");
        }
        let _ = writeln!(
            w,
            "abscissa estimate {:.6}{}",
            self.abscissa.value,
            if self.abscissa.saturated { " (saturated: divergent on the whole grid)" } else { "" }
        );
        match &self.patch.witness {
            Some(wit) => {
                let t: Vec<String> = wit.patch.t.coords().iter().map(|c| c.to_string()).collect();
                let _ = writeln!(w, "patch: witness at t=({}) delta={} with {} points", t.join(","), wit.patch.delta, wit.q.len());
            }
            None => {
                let _ = writeln!(w, "patch: not found after {} scales", self.patch.stats.scales_searched);
            }
        }
        let _ = writeln!(w, "note: dimension evidence is finite-sample; divergence above the threshold is sufficient, not necessary");
        let _ = writeln!(w, "{}", self.summary());
        out
    }
}

/// Threshold, series evidence just above it, abscissa estimate and an actual
/// patch search, for the set against `(k, ε, m)`.
pub fn guarantee_report<S: Scalar>(
    set: &PointSet<S>,
    k: usize,
    epsilon: f64,
    m: usize,
    config: &GuaranteeConfig,
) -> Result<GuaranteeReport<S>> {
    let d = set.dim();
    let threshold = threshold_bound(d, m, k, epsilon)?;
    let ladder: Vec<S> = match &config.ladder {
        Some(l) => l.iter().map(|&r| S::of(r)).collect(),
        None => dyadic_ladder(1.0, set.sample_radius().as_f64())?,
    };
    let center = vec![S::zero(); d];
    let terms = SeriesTerms::new(set, &center, &ladder)?;
    let probe = terms.profile(threshold + config.probe_offset)?;
    let grid = sigma_grid(0.0, d as f64 + config.sigma_step, config.sigma_step);
    let abscissa = abscissa_estimate(set, &center, &grid, &ladder)?;
    let supported = probe.growth_slope > DIVERGENCE_TAU;
    let mut query = config.query.clone().unwrap_or_else(|| PatchQuery::standard(k, epsilon, d, m));
    query.k = k;
    query.epsilon = epsilon;
    query.orientation = super::patch::standard_orientation(d, m);
    let patch = find_patch(set, &query)?;
    Ok(GuaranteeReport { d, m, k, epsilon, threshold, probe, abscissa, supported, patch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_lattice, gen_power_set, gen_primes};

    #[test]
    fn threshold_values() {
        let a = threshold_bound(1, 1, 3, 0.5).unwrap();
        assert!((a - (1.0 + (2.0f64 / 3.0).ln() / 3f64.ln())).abs() < 1e-15);
        assert!((a - 0.63093).abs() < 1e-5);
        let b = threshold_bound(2, 2, 3, 0.25).unwrap();
        assert!((b - (2.0 + (8.0f64 / 9.0).ln() / 9f64.ln())).abs() < 1e-15);
        assert!((b - 1.94639).abs() < 1e-5);
    }

    #[test]
    fn threshold_below_dimension() {
        for d in 1..5 {
            for m in 1..=d {
                for k in 3..8 {
                    for eps in [0.01, 0.1, 0.3, 0.5, 0.9] {
                        assert!(threshold_bound(d, m, k, eps).unwrap() < d as f64);
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_rejects_bad_input() {
        assert!(threshold_bound(1, 1, 2, 0.5).is_err());
        assert!(threshold_bound(1, 1, 3, 0.0).is_err());
        assert!(threshold_bound(1, 1, 3, 1.0).is_err());
        assert!(threshold_bound(1, 2, 3, 0.5).is_err());
        assert!(threshold_bound(1, 0, 3, 0.5).is_err());
    }

    #[test]
    fn ceiling_is_robust_at_integers() {
        // √4 / (2 · 0.1) is 10 up to rounding
        let v = threshold_bound(4, 1, 3, 0.1).unwrap();
        assert!((v - (4.0 + (2.0f64 / 3.0).ln() / 30f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn squares_not_supported() {
        let sq = gen_power_set::<f64>(2.0, 1e8).unwrap();
        let rep = guarantee_report(&sq, 3, 0.5, 1, &GuaranteeConfig::default()).unwrap();
        assert!(!rep.supported);
        assert!(rep.summary().starts_with("condition not supported (abscissa 0.5"), "{}", rep.summary());
    }

    #[test]
    fn primes_supported_with_witness() {
        let p = gen_primes::<f64>(1_000_000).unwrap();
        let rep = guarantee_report(&p, 3, 0.5, 1, &GuaranteeConfig::default()).unwrap();
        assert!(rep.supported);
        assert!(rep.patch.found);
        assert!(rep.patch.witness.as_ref().unwrap().verify());
    }

    #[test]
    fn integers_supported() {
        let z = gen_lattice::<f64>(1, 1e5).unwrap();
        let rep = guarantee_report(&z, 4, 0.1, 1, &GuaranteeConfig::default()).unwrap();
        assert_eq!(rep.summary(), "condition supported; witness found");
        assert!(rep.render().contains("finite-sample"));
    }
}
