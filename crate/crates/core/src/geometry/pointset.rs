use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::metric::Metric;
use super::point::{lex_cmp, Point};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Relative slack allowed when checking that a query ball fits inside the sample.
const SAMPLE_SLACK: f64 = 1e-12;

/// Closed-form count `R ↦ |B(0, R) ∩ F|` of the underlying infinite set,
/// valid for `R ≤ limit`.
#[derive(Clone)]
pub struct ExactCounter {
    f: Arc<dyn Fn(f64) -> u64 + Send + Sync>,
    limit: f64,
}

impl ExactCounter {
    pub fn new(limit: f64, f: impl Fn(f64) -> u64 + Send + Sync + 'static) -> Self {
        ExactCounter { f: Arc::new(f), limit }
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    /// Count within the closed ball of radius `r` about the origin, if `r` is in range.
    pub fn count(&self, r: f64) -> Option<u64> {
        if r < 0.0 {
            Some(0)
        } else if r <= self.limit {
            Some((self.f)(r))
        } else {
            None
        }
    }
}

impl fmt::Debug for ExactCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactCounter").field("limit", &self.limit).finish()
    }
}

/// A finite, deduplicated sample of a discrete set `F ⊂ R^d`.
///
/// The sample is complete inside the closed ball `B(0, sample_radius)`: every
/// point of `F` in that ball is materialized. Points are stored flat, ordered
/// by distance from the origin (ties broken lexicographically), which makes
/// origin-centred ball counts a binary search.
#[derive(Clone, Debug)]
pub struct PointSet<S> {
    dim: usize,
    coords: Vec<S>,
    norms: Vec<S>,
    metric: Metric,
    sample_radius: S,
    counter: Option<ExactCounter>,
    known_gap: Option<S>,
    gap: OnceLock<Option<S>>,
}

impl<S: Scalar> PointSet<S> {
    /// Builds a set from flat coordinates (`dim` values per point), dropping
    /// duplicates. Returns the set and the number of duplicates removed. The
    /// sample radius defaults to the largest norm.
    pub fn from_flat(dim: usize, coords: Vec<S>, metric: Metric) -> Result<(Self, usize)> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: coords.len() % dim });
        }
        metric.check_dim(dim)?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        let n = coords.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| lex_cmp(&coords[a * dim..(a + 1) * dim], &coords[b * dim..(b + 1) * dim]));
        order.dedup_by(|a, b| coords[*a * dim..(*a + 1) * dim] == coords[*b * dim..(*b + 1) * dim]);
        let dropped = n - order.len();

        let mut keyed: Vec<(S, usize)> = order
            .into_iter()
            .map(|i| (metric.norm(&coords[i * dim..(i + 1) * dim]), i))
            .collect();
        // stable sort keeps the lexicographic order among equal norms
        keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite norms"));

        let mut flat = Vec::with_capacity(keyed.len() * dim);
        let mut norms = Vec::with_capacity(keyed.len());
        for (nrm, i) in &keyed {
            flat.extend_from_slice(&coords[i * dim..(i + 1) * dim]);
            norms.push(*nrm);
        }
        let sample_radius = norms.last().copied().unwrap_or_else(S::zero);
        Ok((
            PointSet {
                dim,
                coords: flat,
                norms,
                metric,
                sample_radius,
                counter: None,
                known_gap: None,
                gap: OnceLock::new(),
            },
            dropped,
        ))
    }

    /// Builds a Euclidean set from a list of points.
    pub fn from_points(points: &[Point<S>]) -> Result<Self> {
        let dim = points.first().map_or(1, |p| p.dim());
        let mut flat = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            flat.extend_from_slice(p.coords());
        }
        Ok(Self::from_flat(dim, flat, Metric::Euclidean)?.0)
    }

    /// Builds a one-dimensional set from values on the real line.
    pub fn from_values(values: &[S]) -> Result<Self> {
        Ok(Self::from_flat(1, values.to_vec(), Metric::Euclidean)?.0)
    }

    /// Declares the radius within which the sample is complete. Every point
    /// must lie inside it.
    pub fn with_sample_radius(mut self, radius: S) -> Result<Self> {
        if !(radius >= S::zero()) {
            return Err(invalid("sample radius must be nonnegative"));
        }
        if let Some(&max) = self.norms.last() {
            if max > radius * S::of(1.0 + SAMPLE_SLACK) {
                return Err(invalid(format!("point at norm {max} outside sample radius {radius}")));
            }
        }
        self.sample_radius = radius;
        Ok(self)
    }

    pub fn with_counter(mut self, counter: ExactCounter) -> Self {
        self.counter = Some(counter);
        self
    }

    /// Records a known lower bound on pairwise distances of the underlying set.
    pub fn with_known_gap(mut self, gap: S) -> Self {
        self.known_gap = Some(gap);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn sample_radius(&self) -> S {
        self.sample_radius
    }

    pub fn counter(&self) -> Option<&ExactCounter> {
        self.counter.as_ref()
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Points in storage order (nondecreasing norm).
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[S]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Norms of the points, aligned with [`iter`](Self::iter).
    pub fn norms(&self) -> &[S] {
        &self.norms
    }

    pub fn to_points(&self) -> Vec<Point<S>> {
        self.iter().map(|c| Point::new(c.to_vec()).expect("validated")).collect()
    }

    /// Indices sorted lexicographically by coordinates.
    pub fn lex_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| lex_cmp(self.point(a), self.point(b)));
        idx
    }

    /// Minimum pairwise distance of the materialized points.
    pub fn min_gap(&self) -> Result<S> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints { needed: 2, found: self.len() });
        }
        Ok(self.computed_gap().expect("at least two points"))
    }

    /// Separation used for the exact-count fast path: a declared gap when the
    /// generator knows one, else the sample's minimum gap, else `None` for
    /// sets with fewer than two points.
    pub fn separation(&self) -> Option<S> {
        self.known_gap.or_else(|| self.computed_gap())
    }

    fn computed_gap(&self) -> Option<S> {
        *self.gap.get_or_init(|| {
            if self.len() < 2 {
                return None;
            }
            // sweep along the first coordinate: any metric here dominates |Δx0|
            let mut idx: Vec<usize> = (0..self.len()).collect();
            idx.sort_by(|&a, &b| {
                self.point(a)[0].partial_cmp(&self.point(b)[0]).expect("finite")
            });
            let mut best = S::infinity();
            for (pos, &i) in idx.iter().enumerate() {
                let p = self.point(i);
                for &j in &idx[pos + 1..] {
                    let q = self.point(j);
                    if q[0] - p[0] >= best {
                        break;
                    }
                    let d = self.metric.dist(p, q);
                    if d < best {
                        best = d;
                    }
                }
            }
            Some(best)
        })
    }

    /// Radius available around `center` before the query leaves the sample.
    pub fn usable_radius(&self, center: &[S]) -> S {
        self.sample_radius - self.metric.norm(center)
    }

    fn check_center(&self, center: &[S]) -> Result<()> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: center.len() });
        }
        Ok(())
    }

    /// Errors unless the closed ball `B(center, radius)` lies inside the sample.
    pub fn require_within_sample(&self, center: &[S], radius: S) -> Result<()> {
        self.check_center(center)?;
        let needed = radius + self.metric.norm(center);
        if needed > self.sample_radius * S::of(1.0 + SAMPLE_SLACK) {
            return Err(Error::InsufficientSample {
                needed: needed.as_f64(),
                available: self.sample_radius.as_f64(),
            });
        }
        Ok(())
    }

    /// Indices of materialized points in the closed ball `B(center, radius)`.
    pub fn ball_indices(&self, center: &[S], radius: S) -> Result<Vec<usize>> {
        self.require_within_sample(center, radius)?;
        if center.iter().all(|c| c.is_zero()) {
            let end = self.norms.partition_point(|&n| n <= radius);
            return Ok((0..end).collect());
        }
        // a point with norm outside [|c| - R, |c| + R] cannot be in the ball
        let c_norm = self.metric.norm(center);
        let lo = self.norms.partition_point(|&n| n < c_norm - radius);
        let hi = self.norms.partition_point(|&n| n <= c_norm + radius);
        Ok((lo..hi)
            .into_par_iter()
            .filter(|&i| self.metric.dist(self.point(i), center) <= radius)
            .collect())
    }

    /// Materialized points of the closed ball `B(center, radius)`.
    pub fn ball_points(&self, center: &[S], radius: S) -> Result<Vec<&[S]>> {
        Ok(self.ball_indices(center, radius)?.into_iter().map(|i| self.point(i)).collect())
    }

    /// `|B(center, R) ∩ F|`, using the exact counter for origin-centred queries
    /// when available, otherwise the materialized sample.
    pub fn ball_count(&self, center: &[S], radius: S) -> Result<u64> {
        self.check_center(center)?;
        if radius < S::zero() {
            return Err(invalid("radius must be nonnegative"));
        }
        if center.iter().all(|c| c.is_zero()) {
            if let Some(n) = self.counter.as_ref().and_then(|c| c.count(radius.as_f64())) {
                return Ok(n);
            }
        }
        Ok(self.ball_indices(center, radius)?.len() as u64)
    }

    /// The materialized ball as its own set, complete to `radius` about `center`.
    pub fn restrict_to_ball(&self, center: &[S], radius: S) -> Result<PointSet<S>> {
        let idx = self.ball_indices(center, radius)?;
        Ok(self.subset(&idx))
    }

    /// Materialized subset; carries no counter and takes its own max norm as sample radius.
    pub fn subset(&self, indices: &[usize]) -> PointSet<S> {
        let mut flat = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            flat.extend_from_slice(self.point(i));
        }
        PointSet::from_flat(self.dim, flat, self.metric.clone()).expect("subset of a valid set").0
    }

    /// Union of two materialized samples in the same space.
    pub fn union(&self, other: &PointSet<S>) -> Result<PointSet<S>> {
        if self.dim != other.dim || self.metric != other.metric {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut flat = self.coords.clone();
        flat.extend_from_slice(&other.coords);
        let radius = if self.sample_radius < other.sample_radius {
            self.sample_radius
        } else {
            other.sample_radius
        };
        let (set, _) = PointSet::from_flat(self.dim, flat, self.metric.clone())?;
        let max = set.norms.last().copied().unwrap_or_else(S::zero);
        set.with_sample_radius(if radius > max { radius } else { max })
    }
}

/// Cartesian product under the sup-product metric.
///
/// The product sample is complete inside the sup-ball of radius
/// `min(sample_radius(S), sample_radius(T))`; exact counters multiply.
pub fn product_set<S: Scalar>(a: &PointSet<S>, b: &PointSet<S>) -> Result<PointSet<S>> {
    let dim = a.dim + b.dim;
    let mut flat = Vec::with_capacity(a.len() * b.len() * dim);
    for p in a.iter() {
        for q in b.iter() {
            flat.extend_from_slice(p);
            flat.extend_from_slice(q);
        }
    }
    let mut blocks = a.metric.blocks(a.dim);
    blocks.extend(b.metric.blocks(b.dim));
    let (mut set, _) = PointSet::from_flat(dim, flat, Metric::SupProduct(blocks))?;
    set.sample_radius = if a.sample_radius < b.sample_radius { a.sample_radius } else { b.sample_radius };
    if let (Some(ca), Some(cb)) = (a.counter.clone(), b.counter.clone()) {
        let limit = ca.limit().min(cb.limit());
        set.counter = Some(ExactCounter::new(limit, move |r| {
            ca.count(r).unwrap_or(0) * cb.count(r).unwrap_or(0)
        }));
    }
    set.known_gap = match (a.separation(), b.separation()) {
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
        (g, None) | (None, g) => g,
    };
    Ok(set)
}
