//! Search for `(k, ε, e)`-APs inside a point set.

use rayon::prelude::*;

use super::patch::{check_orientation, patch_size, standard_orientation, verify_patch, ArithmeticPatch};
use crate::error::{invalid, Error, Result};
use crate::geometry::{build_grid_index, lex_cmp, Metric, Point, PointSet};
use crate::scalar::Scalar;

/// Default ratio of the geometric scale ladder.
pub const DEFAULT_DELTA_RATIO: f64 = 1.1;
/// Largest number of anchors for which pairwise scale candidates are generated.
pub const PAIR_CANDIDATE_CAP: usize = 2000;

/// Which sample points may serve as the anchor `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorPolicy {
    All,
    /// The first `n` points in lexicographic order.
    FirstLex(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchQuery {
    pub k: usize,
    pub epsilon: f64,
    pub orientation: Vec<Vec<f64>>,
    /// Smallest ladder scale; defaults to the set's separation.
    pub delta_min: Option<f64>,
    /// Largest ladder scale; defaults to `sample_radius / (k − 1)`.
    pub delta_max: Option<f64>,
    pub ratio: f64,
    pub anchors: AnchorPolicy,
    /// Every target `x` must satisfy `‖x‖ + εΔ ≤ sample_radius − margin`.
    pub margin: f64,
    /// Also try the scales `⟨y − t, e_1⟩ / j` suggested by point pairs.
    pub pair_candidates: bool,
}

impl PatchQuery {
    pub fn new(k: usize, epsilon: f64, orientation: Vec<Vec<f64>>) -> Self {
        PatchQuery {
            k,
            epsilon,
            orientation,
            delta_min: None,
            delta_max: None,
            ratio: DEFAULT_DELTA_RATIO,
            anchors: AnchorPolicy::All,
            margin: 0.0,
            pair_candidates: true,
        }
    }

    /// Query along the first `m` standard basis vectors of `R^d`.
    pub fn standard(k: usize, epsilon: f64, d: usize, m: usize) -> Self {
        PatchQuery::new(k, epsilon, standard_orientation(d, m))
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(invalid("patch size k must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(invalid("epsilon must lie in [0, 1)"));
        }
        if !(self.ratio > 1.0) || !self.ratio.is_finite() {
            return Err(invalid("ladder ratio must exceed 1"));
        }
        if !(self.margin >= 0.0) {
            return Err(invalid("margin must be nonnegative"));
        }
        Ok(())
    }
}

/// Tolerance at which an S-anchored search is guaranteed to find a patch
/// whenever a `(k, ε, e)`-AP with arbitrary anchor and a scale inside the
/// ladder lies in the searched region.
pub fn completeness_epsilon(epsilon: f64, k: usize, m: usize, ratio: f64) -> f64 {
    2.0 * epsilon * ratio + (k - 1) as f64 * (m as f64).sqrt() * (ratio - 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub patch: ArithmeticPatch<S>,
    pub epsilon: f64,
    /// `Q ⊆ S`, lexicographically sorted.
    pub q: Vec<Vec<S>>,
    /// How many points of `Q` are padding rather than nearest representatives.
    pub padded: usize,
}

impl<S: Scalar> Witness<S> {
    pub fn verify(&self) -> bool {
        let q: Vec<&[S]> = self.q.iter().map(Vec::as_slice).collect();
        verify_patch(&q, &self.patch, self.epsilon)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub ladder_scales: usize,
    pub pair_candidates: usize,
    /// Scale candidates examined, in search order, up to and including the hit.
    pub scales_searched: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchReport<S> {
    pub found: bool,
    pub witness: Option<Witness<S>>,
    pub stats: SearchStats,
    pub soundness: String,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    delta: f64,
    /// `None` tries every anchor; `Some(rank)` one anchor by lexicographic rank.
    anchor: Option<usize>,
}

/// Sample points sorted by first coordinate, for range queries of any radius.
struct Sweep<'a, S> {
    set: &'a PointSet<S>,
    order: Vec<usize>,
    first: Vec<S>,
}

impl<'a, S: Scalar> Sweep<'a, S> {
    fn new(set: &'a PointSet<S>) -> Self {
        let mut order: Vec<usize> = (0..set.len()).collect();
        order.sort_by(|&a, &b| set.point(a)[0].partial_cmp(&set.point(b)[0]).expect("finite"));
        let first = order.iter().map(|&i| set.point(i)[0]).collect();
        Sweep { set, order, first }
    }

    fn nearest_within(&self, p: &[S], radius: S) -> Option<usize> {
        let lo = self.first.partition_point(|&x| x < p[0] - radius);
        let hi = self.first.partition_point(|&x| x <= p[0] + radius);
        nearest(self.set, self.order[lo..hi].iter().copied(), p, radius)
    }
}

/// Closest candidate within `radius`; ties go to the lexicographically smaller point.
fn nearest<S: Scalar>(set: &PointSet<S>, cands: impl Iterator<Item = usize>, p: &[S], radius: S) -> Option<usize> {
    let mut best: Option<(S, usize)> = None;
    for i in cands {
        let d = Metric::Euclidean.dist(set.point(i), p);
        if d > radius {
            continue;
        }
        best = match best {
            Some((bd, bi)) if bd < d || (bd == d && lex_cmp(set.point(bi), set.point(i)).is_le()) => Some((bd, bi)),
            _ => Some((d, i)),
        };
    }
    best.map(|(_, i)| i)
}

struct Search<'a, S> {
    set: &'a PointSet<S>,
    orientation: Vec<Vec<S>>,
    k: usize,
    epsilon: f64,
    size: usize,
    reach: S,
    lex: Vec<usize>,
    anchors: usize,
    sweep: Sweep<'a, S>,
}

impl<S: Scalar> Search<'_, S> {
    fn patch(&self, anchor: usize, delta: f64) -> ArithmeticPatch<S> {
        ArithmeticPatch {
            t: Point::new(self.set.point(anchor).to_vec()).expect("sample points are valid"),
            delta: S::of(delta),
            orientation: self.orientation.clone(),
            k: self.k,
        }
    }

    /// Nearest representative for every target, or `None`.
    fn try_anchor(&self, patch: &ArithmeticPatch<S>, lookup: &dyn Fn(&[S], S) -> Option<usize>) -> Option<Vec<usize>> {
        let tol = S::of(self.epsilon) * patch.delta;
        let targets = patch.points();
        if targets.iter().any(|x| Metric::Euclidean.norm(x) + tol > self.reach) {
            return None;
        }
        targets.iter().map(|x| lookup(x, tol)).collect()
    }

    fn assemble(&self, patch: ArithmeticPatch<S>, reps: Vec<usize>) -> Option<Witness<S>> {
        let mut chosen = reps;
        chosen.sort_unstable();
        chosen.dedup();
        let padded = self.size - chosen.len();
        let mut used = chosen.clone();
        for &i in &self.lex {
            if chosen.len() == self.size {
                break;
            }
            if !used.contains(&i) {
                chosen.push(i);
                used.push(i);
            }
        }
        let mut q: Vec<Vec<S>> = chosen.into_iter().map(|i| self.set.point(i).to_vec()).collect();
        q.sort_by(|a, b| lex_cmp(a, b));
        let w = Witness { patch, epsilon: self.epsilon, q, padded };
        w.verify().then_some(w)
    }

    fn run(&self, c: Candidate) -> Result<Option<Witness<S>>> {
        let tol = S::of(self.epsilon * c.delta);
        match c.anchor {
            Some(rank) => {
                let anchor = self.lex[rank];
                let patch = self.patch(anchor, c.delta);
                let lookup = |x: &[S], r: S| self.sweep.nearest_within(x, r);
                Ok(self.try_anchor(&patch, &lookup).and_then(|reps| self.assemble(patch, reps)))
            }
            None => {
                let cell = if self.epsilon > 0.0 { tol } else { S::of(c.delta) };
                let grid = build_grid_index(self.set, cell)?;
                let lookup = |x: &[S], r: S| -> Option<usize> {
                    let hits = grid.query_indices(x, r).ok()?;
                    nearest(self.set, hits.into_iter(), x, r)
                };
                for &anchor in &self.lex[..self.anchors] {
                    let patch = self.patch(anchor, c.delta);
                    if let Some(reps) = self.try_anchor(&patch, &lookup) {
                        if let Some(w) = self.assemble(patch, reps) {
                            return Ok(Some(w));
                        }
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Searches `S` for a `(k, ε, e)`-AP with anchor `t ∈ S`.
///
/// Scales are tried in increasing order: a geometric ladder, plus (for small
/// sets) the scales at which a second sample point lands exactly on a target
/// along `e_1`. For each scale and anchor every target must have a sample
/// point within `εΔ`; the nearest ones form `Q`, which is padded with further
/// sample points to `k^m` elements and re-verified. The first hit in
/// (scale, lexicographic anchor) order is returned.
pub fn find_patch<S: Scalar>(set: &PointSet<S>, query: &PatchQuery) -> Result<PatchReport<S>> {
    query.validate()?;
    if *set.metric() != Metric::Euclidean {
        return Err(invalid("patch search needs a Euclidean set"));
    }
    let d = set.dim();
    let orientation: Vec<Vec<S>> = query.orientation.iter().map(|e| e.iter().map(|&c| S::of(c)).collect()).collect();
    check_orientation(&orientation, d)?;
    let m = orientation.len();
    let size = patch_size(query.k, m)?;
    if set.len() < size {
        return Err(Error::TooFewPoints { needed: size, found: set.len() });
    }
    let eps = query.epsilon;
    let reach = set.sample_radius() - S::of(query.margin);
    let delta_min = match query.delta_min {
        Some(v) => v,
        None => set.separation().expect("at least two points").as_f64(),
    };
    let delta_max = query.delta_max.unwrap_or(set.sample_radius().as_f64() / (query.k - 1) as f64);
    if !(delta_min > 0.0) || !(delta_max >= delta_min) {
        return Err(invalid("scale ladder needs 0 < delta_min ≤ delta_max"));
    }
    let lex = set.lex_order();
    let anchors = match query.anchors {
        AnchorPolicy::All => lex.len(),
        AnchorPolicy::FirstLex(n) => n.min(lex.len()),
    };

    let mut cands = Vec::new();
    let mut delta = delta_min;
    while delta <= delta_max * (1.0 + 1e-12) {
        cands.push(Candidate { delta, anchor: None });
        delta *= query.ratio;
    }
    let ladder_scales = cands.len();
    if query.pair_candidates && anchors <= PAIR_CANDIDATE_CAP {
        let e1: Vec<f64> = query.orientation[0].clone();
        let lo = delta_min / (1.0 + 2.0 * eps);
        for (rank, &i) in lex.iter().enumerate().take(anchors) {
            let t = set.point(i);
            for y in set.iter() {
                let diff: Vec<f64> = y.iter().zip(t).map(|(a, b)| (*a - *b).as_f64()).collect();
                let proj: f64 = diff.iter().zip(&e1).map(|(a, b)| a * b).sum();
                if proj <= 0.0 {
                    continue;
                }
                let resid = diff.iter().zip(&e1).map(|(a, b)| (a - proj * b).powi(2)).sum::<f64>().sqrt();
                for j in 1..query.k {
                    let delta = proj / j as f64;
                    if delta >= lo && delta <= delta_max && resid <= eps * delta {
                        cands.push(Candidate { delta, anchor: Some(rank) });
                    }
                }
            }
        }
    }
    let pair_candidates = cands.len() - ladder_scales;
    cands.sort_by(|a, b| {
        a.delta
            .total_cmp(&b.delta)
            .then_with(|| a.anchor.map_or(0, |r| r + 1).cmp(&b.anchor.map_or(0, |r| r + 1)))
    });

    let search = Search {
        set,
        orientation,
        k: query.k,
        epsilon: eps,
        size,
        reach,
        lex,
        anchors,
        sweep: Sweep::new(set),
    };
    let hit = cands
        .par_iter()
        .enumerate()
        .map(|(pos, &c)| search.run(c).map(|w| w.map(|w| (pos, w))))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let (scales_searched, witness) = match hit {
        Some(Ok(Some((pos, w)))) => (pos + 1, Some(w)),
        Some(Err(e)) => return Err(e),
        _ => (cands.len(), None),
    };
    let soundness = format!(
        "witness re-verified exactly; anchors are sample points, so any ({}, {eps}, e)-AP in the searched region with scale in [{delta_min}, {delta_max}] is found at tolerance {:.4}",
        query.k,
        completeness_epsilon(eps, query.k, m, query.ratio)
    );
    Ok(PatchReport {
        found: witness.is_some(),
        witness,
        stats: SearchStats { ladder_scales, pair_candidates, scales_searched },
        soundness,
    })
}
