//! r-nets, covering-number bounds `N(E, r)` and an exact small-instance oracle.
//!
//! `N(E, r)` is the least number of sets of diameter `≤ r` covering `E`. For a
//! finite `E` it equals the least number of parts in a partition of `E` into
//! parts of diameter `≤ r`, i.e. a minimum clique cover of the graph joining
//! points at distance `≤ r`.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::geometry::{cell_of, lex_cmp, CellKey, Metric, Point, PointSet};
use crate::scalar::Scalar;

/// Separation inflation for the packing bound: an `r(1+μ)`-separated family
/// has at most one point in any set of diameter `≤ r`.
pub const PACKING_INFLATION: f64 = 1e-9;

/// Largest instance accepted by [`exact_cover_oracle`].
pub const ORACLE_MAX_POINTS: usize = 12;

/// Default size below which [`covering_number`] calls the oracle.
pub const DEFAULT_ORACLE_CAP: usize = 10;

/// Shrink factor on grid cells so floating rounding never pushes a cell's
/// diameter above `r`.
const GRID_SHRINK: f64 = 1.0 - 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMethod {
    ExactCount,
    Grid,
    NetPacking,
    Oracle,
}

impl CoverMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CoverMethod::ExactCount => "exact-count",
            CoverMethod::Grid => "grid",
            CoverMethod::NetPacking => "net-packing",
            CoverMethod::Oracle => "oracle",
        }
    }
}

/// Bracket `lower ≤ N(E, r) ≤ upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverBound {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    pub method: CoverMethod,
}

impl CoverBound {
    pub fn exact(n: u64, method: CoverMethod) -> Self {
        CoverBound { lower: n, upper: n, exact: Some(n), method }
    }

    pub fn bracket(lower: u64, upper: u64, method: CoverMethod) -> Self {
        debug_assert!(lower <= upper, "bracket {lower} > {upper}");
        if lower == upper {
            CoverBound::exact(lower, method)
        } else {
            CoverBound { lower, upper, exact: None, method }
        }
    }
}

/// An r-separated subset whose points come within distance `< r` of every source point.
#[derive(Clone, Debug)]
pub struct Net<S> {
    pub points: Vec<Point<S>>,
    pub r: S,
}

impl<S: Scalar> Net<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks separation `≥ r` among net points and covering radius `< r` over `source`.
    pub fn satisfies_invariants(&self, source: &[&[S]], metric: &Metric) -> bool {
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                if metric.dist(p, q) < self.r {
                    return false;
                }
            }
        }
        source
            .iter()
            .all(|x| self.points.iter().any(|p| metric.dist(p, x) < self.r))
    }
}

/// Greedy scan in lexicographic order, accepting a point iff it is at distance
/// `≥ separation` from every accepted point. Returns indices into `points`.
pub(crate) fn greedy_indices<S: Scalar>(points: &[&[S]], metric: &Metric, separation: S) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a], points[b]));
    let mut accepted = Vec::new();
    let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
    let dim = points.first().map_or(1, |p| p.len());
    let mut lo = CellKey::with_capacity(dim);
    let mut key = CellKey::with_capacity(dim);
    for i in order {
        let p = points[i];
        let home = cell_of(p, None, separation);
        // a conflicting point differs by < separation in every coordinate
        lo.clear();
        lo.extend(home.iter().map(|&c| c.saturating_sub(1)));
        key.clear();
        key.extend(lo.iter().copied());
        let mut clash = false;
        'scan: loop {
            if let Some(bucket) = cells.get(&key) {
                for &j in bucket {
                    if metric.dist(points[j], p) < separation {
                        clash = true;
                        break 'scan;
                    }
                }
            }
            let mut axis = 0;
            loop {
                if axis == key.len() {
                    break 'scan;
                }
                if key[axis] < home[axis].saturating_add(1) {
                    key[axis] += 1;
                    break;
                }
                key[axis] = lo[axis];
                axis += 1;
            }
        }
        if !clash {
            cells.entry(home).or_default().push(i);
            accepted.push(i);
        }
    }
    accepted
}

/// Greedy r-net of the materialized sample (lexicographic scan order).
pub fn greedy_net<S: Scalar>(set: &PointSet<S>, r: S) -> Result<Net<S>> {
    if !(r > S::zero()) {
        return Err(invalid("net radius must be positive"));
    }
    let pts: Vec<&[S]> = set.iter().collect();
    let idx = greedy_indices(&pts, set.metric(), r);
    Ok(Net {
        points: idx.into_iter().map(|i| Point::new(pts[i].to_vec()).expect("valid")).collect(),
        r,
    })
}

/// Number of occupied grid cells among `points`, with cells of diameter `≤ r`
/// anchored at `anchor`.
pub(crate) fn grid_cells<S: Scalar>(points: &[&[S]], metric: &Metric, anchor: Option<&[S]>, r: S) -> u64 {
    let dim = points.first().map_or(1, |p| p.len());
    let side = r / S::of_count(metric.widest_block(dim) as u64).sqrt() * S::of(GRID_SHRINK);
    let mut cells: Vec<CellKey> = points.iter().map(|p| cell_of(p, anchor, side)).collect();
    cells.sort_unstable();
    cells.dedup();
    cells.len() as u64
}

/// Upper bound on `N(B(center, R) ∩ S, r)`: occupied cells of a grid of
/// diameter-`r` cubes anchored at `center`.
pub fn grid_cover_count<S: Scalar>(set: &PointSet<S>, center: &[S], radius: S, r: S) -> Result<u64> {
    if !(r > S::zero()) {
        return Err(invalid("cover scale must be positive"));
    }
    let pts = set.ball_points(center, radius)?;
    Ok(grid_cells(&pts, set.metric(), Some(center), r))
}

/// Lower bound on `N(B(center, R) ∩ S, r)`: size of a greedy net at separation `r(1+μ)`.
pub fn packing_lower_bound<S: Scalar>(set: &PointSet<S>, center: &[S], radius: S, r: S) -> Result<u64> {
    if !(r > S::zero()) {
        return Err(invalid("cover scale must be positive"));
    }
    let pts = set.ball_points(center, radius)?;
    Ok(packing_count(&pts, set.metric(), r))
}

pub(crate) fn packing_count<S: Scalar>(points: &[&[S]], metric: &Metric, r: S) -> u64 {
    greedy_indices(points, metric, r * S::of(1.0 + PACKING_INFLATION)).len() as u64
}

/// Covering-number bracket for a finite list of points.
pub fn cover_bounds_of<S: Scalar>(
    points: &[&[S]],
    metric: &Metric,
    r: S,
    separation: Option<S>,
    oracle_cap: usize,
) -> Result<CoverBound> {
    if !(r > S::zero()) {
        return Err(invalid("cover scale must be positive"));
    }
    let n = points.len() as u64;
    if n <= 1 || separation.is_some_and(|g| r < g) {
        return Ok(CoverBound::exact(n, CoverMethod::ExactCount));
    }
    if points.len() <= oracle_cap.min(ORACLE_MAX_POINTS) {
        return Ok(CoverBound::exact(exact_cover_oracle(points, metric, r)?, CoverMethod::Oracle));
    }
    let lower = packing_count(points, metric, r);
    let upper = grid_cells(points, metric, None, r);
    Ok(CoverBound::bracket(lower, upper, CoverMethod::Grid))
}

/// Bracket on `N(B(center, R) ∩ S, r)`.
///
/// Below the set's separation every part holds one point, so the ball count
/// is exact (and may come from the closed-form counter). Otherwise the
/// materialized ball is bracketed by the packing and grid bounds, or solved
/// exactly when it has at most `oracle_cap` points.
pub fn covering_number<S: Scalar>(
    set: &PointSet<S>,
    center: &[S],
    radius: S,
    r: S,
    oracle_cap: usize,
) -> Result<CoverBound> {
    if !(r > S::zero()) {
        return Err(invalid("cover scale must be positive"));
    }
    let sep = set.separation();
    if sep.is_none_or(|g| r < g) {
        return Ok(CoverBound::exact(set.ball_count(center, radius)?, CoverMethod::ExactCount));
    }
    let pts = set.ball_points(center, radius)?;
    if pts.len() <= oracle_cap.min(ORACLE_MAX_POINTS) {
        return Ok(CoverBound::exact(exact_cover_oracle(&pts, set.metric(), r)?, CoverMethod::Oracle));
    }
    let lower = packing_count(&pts, set.metric(), r);
    let upper = grid_cells(&pts, set.metric(), Some(center), r);
    Ok(CoverBound::bracket(lower, upper, CoverMethod::Grid))
}

/// Exact minimum number of parts of diameter `≤ r` partitioning `points`.
pub fn exact_cover_oracle<S: Scalar>(points: &[&[S]], metric: &Metric, r: S) -> Result<u64> {
    let n = points.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::InstanceTooLarge { size: n, cap: ORACLE_MAX_POINTS });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && metric.dist(points[i], points[j]) <= r {
                adj[i] |= 1 << j;
            }
        }
    }
    let full = (1usize << n) - 1;
    let mut clique = vec![false; full + 1];
    clique[0] = true;
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        clique[mask] = clique[rest] && (adj[low] as usize & rest) == rest;
    }
    let mut best = vec![u8::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let others = mask ^ low;
        let mut sub = others;
        let mut value = u8::MAX;
        loop {
            let part = sub | low;
            if clique[part] {
                value = value.min(best[mask ^ part].saturating_add(1));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        best[mask] = value;
    }
    Ok(best[full] as u64)
}
