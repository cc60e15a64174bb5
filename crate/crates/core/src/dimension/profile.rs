//! Counting profiles and the windowed-slope zeta and box estimators.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::ladder::check_increasing;
use crate::covering::{cover_bounds_of, covering_number, CoverBound, CoverMethod, DEFAULT_ORACLE_CAP};
use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, PointSet};
use crate::scalar::Scalar;

/// Minimum number of rungs in a profile.
pub const MIN_RUNGS: usize = 4;
/// Default slope window, in rungs.
pub const DEFAULT_WINDOW: usize = 3;
/// Upper/lower ratio above which a bracket is flagged as wide.
pub const WIDE_BRACKET_RATIO: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rung<S> {
    pub radius: S,
    pub bound: CoverBound,
}

/// `N(B(α, R_j) ∩ F, r)` along a ladder of radii.
#[derive(Clone, Debug)]
pub struct CountingProfile<S> {
    pub center: Point<S>,
    pub cover_scale: S,
    pub rungs: Vec<Rung<S>>,
}

impl<S: Scalar> CountingProfile<S> {
    pub fn radii(&self) -> Vec<S> {
        self.rungs.iter().map(|r| r.radius).collect()
    }

    pub fn lower_counts(&self) -> Vec<u64> {
        self.rungs.iter().map(|r| r.bound.lower).collect()
    }

    pub fn upper_counts(&self) -> Vec<u64> {
        self.rungs.iter().map(|r| r.bound.upper).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.rungs.iter().all(|r| r.bound.exact.is_some())
    }
}

/// Tightens bounds so lower and upper are each nondecreasing along the ladder:
/// a lower bound at `R_i` also bounds every larger ball, an upper bound at
/// `R_j` also bounds every smaller one.
fn tighten(bounds: &mut [CoverBound]) {
    for j in 1..bounds.len() {
        bounds[j].lower = bounds[j].lower.max(bounds[j - 1].lower);
    }
    for j in (0..bounds.len().saturating_sub(1)).rev() {
        bounds[j].upper = bounds[j].upper.min(bounds[j + 1].upper);
    }
    for b in bounds.iter_mut() {
        *b = if b.lower == b.upper {
            CoverBound::exact(b.lower, b.method)
        } else {
            CoverBound::bracket(b.lower, b.upper, b.method)
        };
    }
}

/// Covering numbers of `B(center, R_j) ∩ S` at scale `r` for every rung.
pub fn counting_profile<S: Scalar>(
    set: &PointSet<S>,
    center: &[S],
    r: S,
    ladder: &[S],
) -> Result<CountingProfile<S>> {
    if !(r > S::zero()) {
        return Err(invalid("cover scale must be positive"));
    }
    check_increasing(ladder, MIN_RUNGS)?;
    let mut bounds = ladder
        .par_iter()
        .map(|&radius| covering_number(set, center, radius, r, DEFAULT_ORACLE_CAP))
        .collect::<Result<Vec<_>>>()?;
    tighten(&mut bounds);
    Ok(CountingProfile {
        center: Point::new(center.to_vec())?,
        cover_scale: r,
        rungs: ladder.iter().zip(bounds).map(|(&radius, bound)| Rung { radius, bound }).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Flat,
    Mixed,
}

impl Trend {
    fn of(slopes: &[f64]) -> Trend {
        const TOL: f64 = 1e-12;
        let steps: Vec<f64> = slopes.windows(2).map(|w| w[1] - w[0]).collect();
        if steps.iter().all(|s| s.abs() <= TOL) {
            Trend::Flat
        } else if steps.iter().all(|&s| s > TOL) {
            Trend::Increasing
        } else if steps.iter().all(|&s| s < -TOL) {
            Trend::Decreasing
        } else {
            Trend::Mixed
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::Flat => "flat",
            Trend::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Trend of the upper-count slopes over the estimation range.
    pub trend: Trend,
    /// Largest `upper / lower` over the rungs used.
    pub bracket_ratio: f64,
    pub wide_bracket: bool,
    /// Counts constant over the estimation range.
    pub frozen: bool,
    /// An estimate outside `[0, d]`.
    pub out_of_range: bool,
    /// Lower-count slopes exceeded the upper estimate and were capped to it.
    pub crossed: bool,
    /// Leading rungs dropped for having zero count.
    pub dropped_rungs: usize,
}

/// Upper and lower scaling exponents read off windowed log-log slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub upper: f64,
    pub lower: f64,
    /// Slope of the upper counts ending at each rung `j ≥ window` (`None`
    /// for dropped rungs).
    pub window_slopes: Vec<Option<f64>>,
    /// Same for the lower counts.
    pub lower_slopes: Vec<Option<f64>>,
    pub window: usize,
    /// First rung of the estimation range.
    pub from_rung: usize,
    pub diagnostics: Diagnostics,
}

impl DimensionEstimate {
    /// Slopes over the estimation range.
    pub fn range_slopes(&self) -> Vec<f64> {
        self.window_slopes[self.from_rung..].iter().flatten().copied().collect()
    }
}

/// Shared slope machinery: `x` is the log scale, counts are bracketed.
fn estimate_from(x: &[f64], lower: &[u64], upper: &[u64], window: usize, dim: usize) -> Result<DimensionEstimate> {
    let n = x.len();
    if window == 0 {
        return Err(invalid("window must be at least 1"));
    }
    if upper.iter().all(|&c| c == 0) {
        return Err(Error::EmptySet);
    }
    let start = lower.iter().position(|&c| c > 0).unwrap_or_else(|| {
        upper.iter().position(|&c| c > 0).expect("some upper count is positive")
    });
    let eff = n - start;
    if eff <= window {
        return Err(invalid(format!(
            "{eff} nonempty rungs cannot support a window of {window}"
        )));
    }
    let slope = |c: &[u64], j: usize| {
        let (a, b) = (c[j - window].max(1) as f64, c[j].max(1) as f64);
        (b.ln() - a.ln()) / (x[j] - x[j - window])
    };
    let mut window_slopes = vec![None; n];
    let mut lower_slopes = vec![None; n];
    for j in start + window..n {
        window_slopes[j] = Some(slope(upper, j));
        lower_slopes[j] = Some(slope(lower, j));
    }
    let from = start + window.max(eff / 2);
    let top: Vec<f64> = window_slopes[from..].iter().flatten().copied().collect();
    let top_lower: Vec<f64> = lower_slopes[from..].iter().flatten().copied().collect();
    let upper_est = top.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut lower_est = top_lower.iter().copied().fold(f64::INFINITY, f64::min);
    let crossed = lower_est > upper_est;
    if crossed {
        lower_est = upper_est;
    }
    let bracket_ratio = (start..n)
        .map(|j| upper[j] as f64 / lower[j].max(1) as f64)
        .fold(1.0, f64::max);
    let range = from - window..n;
    let frozen = upper[range.clone()].windows(2).all(|w| w[0] == w[1])
        && lower[range].windows(2).all(|w| w[0] == w[1]);
    let d = dim as f64;
    let out_of_range = [upper_est, lower_est].iter().any(|&e| e < -1e-9 || e > d + 1e-9);
    Ok(DimensionEstimate {
        upper: upper_est,
        lower: lower_est,
        window_slopes,
        lower_slopes,
        window,
        from_rung: from,
        diagnostics: Diagnostics {
            trend: Trend::of(&top),
            bracket_ratio,
            wide_bracket: bracket_ratio > WIDE_BRACKET_RATIO,
            frozen,
            out_of_range,
            crossed,
            dropped_rungs: start,
        },
    })
}

/// Upper and lower zeta-dimension estimates from a counting profile.
///
/// Slopes `s_j = (log C_j − log C_{j−w}) / (log R_j − log R_{j−w})` are taken
/// over upper counts for the upper estimate and lower counts for the lower
/// one; the estimates are the max and min of the slopes over the top half of
/// the ladder. Leading rungs with zero count are dropped.
pub fn zeta_estimates<S: Scalar>(profile: &CountingProfile<S>, window: usize) -> Result<DimensionEstimate> {
    if profile.rungs.len() <= window {
        return Err(invalid("ladder length must exceed the window"));
    }
    let x: Vec<f64> = profile.rungs.iter().map(|r| r.radius.as_f64().ln()).collect();
    estimate_from(&x, &profile.lower_counts(), &profile.upper_counts(), window, profile.center.dim())
}

/// Small-scale box-dimension estimate of the (bounded) sample itself.
///
/// `scales` is a decreasing list of cover scales; slopes are taken against
/// `−log r`.
#[derive(Clone, Debug)]
pub struct BoxProfile<S> {
    pub scales: Vec<S>,
    pub bounds: Vec<CoverBound>,
    pub estimate: DimensionEstimate,
}

pub fn box_dimension_estimate<S: Scalar>(set: &PointSet<S>, scales: &[S], window: usize) -> Result<BoxProfile<S>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let rev: Vec<S> = scales.iter().rev().copied().collect();
    check_increasing(&rev, MIN_RUNGS).map_err(|_| invalid("box scales must be positive, strictly decreasing, at least 4"))?;
    let pts: Vec<&[S]> = set.iter().collect();
    let sep = set.separation();
    let mut bounds = scales
        .par_iter()
        .map(|&r| cover_bounds_of(&pts, set.metric(), r, sep, DEFAULT_ORACLE_CAP))
        .collect::<Result<Vec<_>>>()?;
    // N(X, r) is nonincreasing in r: smaller scales come later in the list
    for j in 1..bounds.len() {
        bounds[j].lower = bounds[j].lower.max(bounds[j - 1].lower);
    }
    for j in (0..bounds.len() - 1).rev() {
        bounds[j].upper = bounds[j].upper.min(bounds[j + 1].upper);
    }
    for b in bounds.iter_mut() {
        if b.lower == b.upper {
            *b = CoverBound::exact(b.lower, b.method);
        }
    }
    let x: Vec<f64> = scales.iter().map(|r| -r.as_f64().ln()).collect();
    let lower: Vec<u64> = bounds.iter().map(|b| b.lower).collect();
    let upper: Vec<u64> = bounds.iter().map(|b| b.upper).collect();
    let mut estimate = estimate_from(&x, &lower, &upper, window, set.dim())?;
    if estimate.diagnostics.frozen {
        estimate.upper = 0.0;
        estimate.lower = 0.0;
    }
    Ok(BoxProfile { scales: scales.to_vec(), bounds, estimate })
}

/// Rung table: a `#` header, then one line per rung with `R lower upper slope`
/// (`-` where no slope is defined), then the final estimates as `#` lines.
pub fn render_rung_table<S: Scalar>(profile: &CountingProfile<S>, estimate: &DimensionEstimate) -> String {
    let mut out = String::from("# R lower upper slope\n");
    for (j, rung) in profile.rungs.iter().enumerate() {
        let slope = estimate.window_slopes.get(j).copied().flatten();
        let slope = slope.map_or_else(|| "-".to_string(), |s| format!("{s:.6}"));
        writeln!(out, "{} {} {} {}", rung.radius.as_f64(), rung.bound.lower, rung.bound.upper, slope)
            .expect("writing to a String");
    }
    writeln!(out, "# upper {:.6}", estimate.upper).expect("writing to a String");
    writeln!(out, "# lower {:.6}", estimate.lower).expect("writing to a String");
    writeln!(out, "# window {}", estimate.window).expect("writing to a String");
    let d = &estimate.diagnostics;
    writeln!(
        out,
        "# trend {} bracket_ratio {:.4} wide_bracket {} frozen {} out_of_range {} crossed {} dropped_rungs {}",
        d.trend.tag(),
        d.bracket_ratio,
        d.wide_bracket,
        d.frozen,
        d.out_of_range,
        d.crossed,
        d.dropped_rungs
    )
    .expect("writing to a String");
    out
}

/// One parsed row of a rung table.
#[derive(Clone, Debug, PartialEq)]
pub struct RungRow {
    pub radius: f64,
    pub lower: u64,
    pub upper: u64,
    pub slope: Option<f64>,
}

/// Reads the rung rows of a table written by [`render_rung_table`].
pub fn parse_rung_table(text: &str) -> Result<Vec<RungRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: &str| Error::Parse { line: i + 1, message: m.to_string() };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad("expected 4 fields"));
        }
        rows.push(RungRow {
            radius: f[0].parse().map_err(|_| bad("bad radius"))?,
            lower: f[1].parse().map_err(|_| bad("bad lower count"))?,
            upper: f[2].parse().map_err(|_| bad("bad upper count"))?,
            slope: if f[3] == "-" { None } else { Some(f[3].parse().map_err(|_| bad("bad slope"))?) },
        });
    }
    Ok(rows)
}

/// Two-column plot data `ln R  ln N` over the upper counts, skipping empty rungs.
pub fn plot_data<S: Scalar>(profile: &CountingProfile<S>) -> String {
    let mut out = String::new();
    for rung in &profile.rungs {
        if rung.bound.upper > 0 {
            writeln!(out, "{:.9} {:.9}", rung.radius.as_f64().ln(), (rung.bound.upper as f64).ln())
                .expect("writing to a String");
        }
    }
    out
}

impl<S: Scalar> CountingProfile<S> {
    /// True when every rung is a plain ball count (cover scale below the separation).
    pub fn is_ball_count(&self) -> bool {
        self.rungs.iter().all(|r| r.bound.method == CoverMethod::ExactCount)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::ladder::{dyadic_down_ladder, dyadic_ladder};
    use crate::generators::{gen_lattice, gen_power_set};
    use crate::geometry::Metric;

    #[test]
    fn integers_profile_is_exact() {
        let z = gen_lattice::<f64>(1, 1024.0).unwrap();
        let ladder = dyadic_ladder(16.0, 1024.0).unwrap();
        let p = counting_profile(&z, &[0.0], 0.5, &ladder).unwrap();
        for rung in &p.rungs {
            assert_eq!(rung.bound.exact, Some(2 * rung.radius as u64 + 1));
        }
        let e = zeta_estimates(&p, DEFAULT_WINDOW).unwrap();
        assert!((e.upper - 1.0).abs() < 0.02 && e.lower <= e.upper);
    }

    #[test]
    fn squares_through_counter() {
        let sq = gen_power_set::<f64>(2.0, 1e4).unwrap();
        let ladder: Vec<f64> = (2..=10).map(|e| 10f64.powi(e)).collect();
        let p = counting_profile(&sq, &[0.0], 0.5, &ladder).unwrap();
        for rung in &p.rungs {
            assert_eq!(rung.bound.exact, Some(rung.radius.sqrt().floor() as u64));
        }
    }

    #[test]
    fn all_zero_is_empty_set() {
        let far = PointSet::from_values(&[100.0, 200.0]).unwrap();
        let p = counting_profile(&far, &[0.0], 0.5, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!(matches!(zeta_estimates(&p, 2), Err(Error::EmptySet)));
    }

    #[test]
    fn leading_zeros_dropped() {
        let s = PointSet::from_values(&[3.0, 5.0, 9.0, 17.0, 33.0, 65.0]).unwrap();
        let ladder = dyadic_ladder(1.0, 64.0).unwrap();
        let p = counting_profile(&s, &[0.0], 0.5, &ladder).unwrap();
        let e = zeta_estimates(&p, 1).unwrap();
        assert_eq!(e.diagnostics.dropped_rungs, 2);
        assert!(e.window_slopes[2].is_none());
    }

    #[test]
    fn profile_rejects_short_or_unsorted_ladders() {
        let z = gen_lattice::<f64>(1, 100.0).unwrap();
        assert!(counting_profile(&z, &[0.0], 0.5, &[1.0, 2.0, 3.0]).is_err());
        assert!(counting_profile(&z, &[0.0], 0.5, &[1.0, 3.0, 2.0, 4.0]).is_err());
        assert!(counting_profile(&z, &[0.0], 0.0, &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn bracketed_profile_is_monotone() {
        let z = gen_lattice::<f64>(2, 64.0).unwrap();
        let ladder = dyadic_ladder(4.0, 64.0).unwrap();
        let p = counting_profile(&z, &[0.0, 0.0], 3.0, &ladder).unwrap();
        for w in p.rungs.windows(2) {
            assert!(w[0].bound.lower <= w[1].bound.lower);
            assert!(w[0].bound.upper <= w[1].bound.upper);
        }
        let e = zeta_estimates(&p, 2).unwrap();
        assert!(e.lower <= e.upper);
    }

    #[test]
    fn box_of_finite_set_below_gap_is_zero() {
        let s = PointSet::from_values(&[0.0, 1.0, 2.5, 4.0]).unwrap();
        let scales = dyadic_down_ladder(0.5, 1.0 / 64.0).unwrap();
        let b = box_dimension_estimate(&s, &scales, 2).unwrap();
        assert_eq!(b.estimate.upper, 0.0);
        assert!(b.estimate.diagnostics.frozen);
        let one = PointSet::from_values(&[7.0]).unwrap();
        assert_eq!(box_dimension_estimate(&one, &scales, 2).unwrap().estimate.upper, 0.0);
    }

    #[test]
    fn table_round_trip() {
        let z = gen_lattice::<f64>(1, 256.0).unwrap();
        let ladder = dyadic_ladder(2.0, 256.0).unwrap();
        let p = counting_profile(&z, &[0.0], 0.5, &ladder).unwrap();
        let e = zeta_estimates(&p, 2).unwrap();
        let text = render_rung_table(&p, &e);
        let rows = parse_rung_table(&text).unwrap();
        assert_eq!(rows.len(), p.rungs.len());
        assert_eq!(rows[2].upper, 17);
        assert!(rows[0].slope.is_none() && rows[2].slope.is_some());
        assert_eq!(plot_data(&p).lines().count(), p.rungs.len());
    }

    #[test]
    fn sup_product_doubles_slope() {
        let z = gen_lattice::<f64>(1, 512.0).unwrap();
        let small = z.restrict_to_ball(&[0.0], 64.0).unwrap();
        let zz = crate::geometry::product_set(&small, &small).unwrap();
        assert_eq!(zz.metric(), &Metric::SupProduct(vec![1, 1]));
        let ladder = dyadic_ladder(2.0, 64.0).unwrap();
        let p1 = counting_profile(&small, &[0.0], 0.5, &ladder).unwrap();
        let p2 = counting_profile(&zz, &[0.0, 0.0], 0.5, &ladder).unwrap();
        let (e1, e2) = (zeta_estimates(&p1, 2).unwrap(), zeta_estimates(&p2, 2).unwrap());
        assert!((e2.upper - 2.0 * e1.upper).abs() < 1e-12);
    }
}
