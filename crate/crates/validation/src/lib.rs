//! Brute-force reference computations.
//!
//! Everything here works on plain `f64` coordinates with only the standard
//! library, so it shares no code with the crate under test. The routines are
//! slow on purpose: exhaustive enumeration, trial division, direct sums.

pub fn euclid(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Sup over consecutive coordinate blocks of the Euclidean block distances.
pub fn sup_product(blocks: &[usize], p: &[f64], q: &[f64]) -> f64 {
    let mut at = 0;
    let mut best = 0.0f64;
    for &b in blocks {
        best = best.max(euclid(&p[at..at + b], &q[at..at + b]));
        at += b;
    }
    best
}

/// Minimum number of parts of diameter at most `r` partitioning `points`,
/// by depth-first assignment of each point to a compatible part or a new one.
pub fn min_cover(points: &[Vec<f64>], r: f64, dist: &dyn Fn(&[f64], &[f64]) -> f64) -> usize {
    fn go(
        i: usize,
        pts: &[Vec<f64>],
        r: f64,
        dist: &dyn Fn(&[f64], &[f64]) -> f64,
        parts: &mut Vec<Vec<usize>>,
        best: &mut usize,
    ) {
        if parts.len() >= *best {
            return;
        }
        if i == pts.len() {
            *best = parts.len();
            return;
        }
        for j in 0..parts.len() {
            if parts[j].iter().all(|&q| dist(&pts[i], &pts[q]) <= r) {
                parts[j].push(i);
                go(i + 1, pts, r, dist, parts, best);
                parts[j].pop();
            }
        }
        parts.push(vec![i]);
        go(i + 1, pts, r, dist, parts, best);
        parts.pop();
    }
    let mut best = points.len();
    if points.is_empty() {
        return 0;
    }
    go(0, points, r, dist, &mut Vec::new(), &mut best);
    best
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain sieve of Eratosthenes, primes `≤ n`.
pub fn primes_upto(n: usize) -> Vec<u64> {
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

/// Integer points `(x, y)` with `x² + y² ≤ n2`, by scanning the square.
pub fn circle_count(n2: i64) -> u64 {
    let m = (n2 as f64).sqrt() as i64 + 1;
    let mut c = 0;
    for x in -m..=m {
        for y in -m..=m {
            if x * x + y * y <= n2 {
                c += 1;
            }
        }
    }
    c
}

/// `Σ ‖v − c‖^{−σ}` over points with `0 < ‖v − c‖ ≤ ell`, summed smallest term first.
pub fn direct_zeta_sum(points: &[Vec<f64>], center: &[f64], sigma: f64, ell: f64) -> f64 {
    let mut terms: Vec<f64> = points
        .iter()
        .map(|p| euclid(p, center))
        .filter(|&d| d > 0.0 && d <= ell)
        .map(|d| d.powf(-sigma))
        .collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    terms.iter().sum()
}

/// Search box for [`ap_oracle_1d`].
#[derive(Clone, Copy, Debug)]
pub struct ApRegion {
    /// Every patch point `x` must satisfy `|x| + εΔ ≤ radius`.
    pub radius: f64,
    pub delta_min: f64,
    pub delta_max: f64,
}

/// Exhaustive search for a `(k, ε, {1})`-AP in a finite set of reals.
///
/// Each patch point `t + iΔ` is assigned a set element `a_i` (nondecreasing in
/// `i`, which loses nothing since nearest elements are ordered). For a fixed
/// assignment the admissible `(t, Δ)` form a bounded polygon cut out by the
/// linear constraints `|t + iΔ − a_i| ≤ εΔ` plus the region limits, so it is
/// nonempty iff one of the pairwise intersections of constraint lines is
/// admissible. Returns an admissible `(t, Δ)`.
pub fn ap_oracle_1d(values: &[f64], k: usize, eps: f64, region: ApRegion) -> Option<(f64, f64)> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    if v.len() < k || k < 2 {
        return None;
    }
    let mut idx = vec![0usize; k];
    loop {
        let a: Vec<f64> = idx.iter().map(|&i| v[i]).collect();
        if let Some(hit) = feasible(&a, eps, region) {
            return Some(hit);
        }
        // next nondecreasing index tuple
        let mut j = k;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            if idx[j] + 1 < v.len() {
                idx[j] += 1;
                for l in j + 1..k {
                    idx[l] = idx[j];
                }
                break;
            }
        }
    }
}

/// Half-planes `p·t + q·Δ ≤ c`.
fn feasible(a: &[f64], eps: f64, region: ApRegion) -> Option<(f64, f64)> {
    let k = a.len();
    let mut h: Vec<(f64, f64, f64)> = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        let i = i as f64;
        h.push((1.0, i - eps, ai));
        h.push((-1.0, -i - eps, -ai));
    }
    let last = (k - 1) as f64;
    h.push((-1.0, eps, region.radius));
    h.push((1.0, last + eps, region.radius));
    h.push((0.0, -1.0, -region.delta_min));
    h.push((0.0, 1.0, region.delta_max));
    let scale = a.iter().fold(region.radius.abs(), |m, x| m.max(x.abs())).max(1.0);
    let tol = 1e-12 * scale;
    for x in 0..h.len() {
        for y in x + 1..h.len() {
            let (p1, q1, c1) = h[x];
            let (p2, q2, c2) = h[y];
            let det = p1 * q2 - p2 * q1;
            if det.abs() < 1e-12 {
                continue;
            }
            let t = (c1 * q2 - c2 * q1) / det;
            let d = (p1 * c2 - p2 * c1) / det;
            if d > 0.0 && h.iter().all(|&(p, q, c)| p * t + q * d <= c + tol) {
                return Some((t, d));
            }
        }
    }
    None
}
