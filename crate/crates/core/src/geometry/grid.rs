use std::collections::HashMap;

use smallvec::SmallVec;

use super::pointset::PointSet;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

pub(crate) type CellKey = SmallVec<[i64; 4]>;

#[inline]
pub(crate) fn cell_of<S: Scalar>(p: &[S], anchor: Option<&[S]>, cell: S) -> CellKey {
    p.iter()
        .enumerate()
        .map(|(i, &c)| {
            let shifted = match anchor {
                Some(a) => c - a[i],
                None => c,
            };
            quantize(shifted / cell)
        })
        .collect()
}

#[inline]
fn quantize<S: Scalar>(v: S) -> i64 {
    let f = v.floor();
    if f >= S::of(i64::MAX as f64) {
        i64::MAX
    } else if f <= S::of(i64::MIN as f64) {
        i64::MIN
    } else {
        f.to_i64().expect("in range")
    }
}

/// Uniform hash grid over a point set for fixed-radius queries.
#[derive(Debug)]
pub struct GridIndex<'a, S> {
    set: &'a PointSet<S>,
    cell_size: S,
    buckets: HashMap<CellKey, Vec<u32>>,
}

/// Buckets every point of `set` by its floor-quantized coordinates.
pub fn build_grid_index<S: Scalar>(set: &PointSet<S>, cell_size: S) -> Result<GridIndex<'_, S>> {
    if !(cell_size > S::zero()) || !cell_size.is_finite() {
        return Err(invalid("grid cell size must be positive"));
    }
    let mut buckets: HashMap<CellKey, Vec<u32>> = HashMap::new();
    for (i, p) in set.iter().enumerate() {
        buckets.entry(cell_of(p, None, cell_size)).or_default().push(i as u32);
    }
    Ok(GridIndex { set, cell_size, buckets })
}

impl<'a, S: Scalar> GridIndex<'a, S> {
    pub fn cell_size(&self) -> S {
        self.cell_size
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Indices of the points at distance `≤ radius` from `p`, in storage order.
    pub fn query_indices(&self, p: &[S], radius: S) -> Result<Vec<usize>> {
        if p.len() != self.set.dim() {
            return Err(Error::DimensionMismatch { expected: self.set.dim(), found: p.len() });
        }
        let metric = self.set.metric();
        let mut out = Vec::new();
        if radius < S::zero() {
            return Ok(out);
        }
        // both metrics dominate every coordinate difference, so candidates lie in this box
        let lo: CellKey = p.iter().map(|&c| quantize((c - radius) / self.cell_size)).collect();
        let hi: CellKey = p.iter().map(|&c| quantize((c + radius) / self.cell_size)).collect();
        let span = lo
            .iter()
            .zip(&hi)
            .try_fold(1u128, |acc, (&l, &h)| acc.checked_mul((h as i128 - l as i128 + 1) as u128));

        let mut visit = |bucket: &Vec<u32>| {
            for &i in bucket {
                let i = i as usize;
                if metric.dist(self.set.point(i), p) <= radius {
                    out.push(i);
                }
            }
        };
        match span {
            Some(n) if n <= self.buckets.len() as u128 => {
                let mut key = lo.clone();
                loop {
                    if let Some(b) = self.buckets.get(&key) {
                        visit(b);
                    }
                    // odometer increment over the box of cells
                    let mut axis = 0;
                    loop {
                        if axis == key.len() {
                            out.sort_unstable();
                            return Ok(out);
                        }
                        if key[axis] < hi[axis] {
                            key[axis] += 1;
                            break;
                        }
                        key[axis] = lo[axis];
                        axis += 1;
                    }
                }
            }
            _ => {
                for (key, b) in &self.buckets {
                    if key.iter().zip(lo.iter().zip(&hi)).all(|(k, (l, h))| l <= k && k <= h) {
                        visit(b);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Points at distance `≤ radius` from `p`.
    pub fn query_within(&self, p: &[S], radius: S) -> Result<Vec<&'a [S]>> {
        let set = self.set;
        Ok(self.query_indices(p, radius)?.into_iter().map(|i| set.point(i)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Metric;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_lattice(r: i64) -> PointSet<f64> {
        let mut flat = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                flat.extend([x as f64, y as f64]);
            }
        }
        PointSet::from_flat(2, flat, Metric::Euclidean).unwrap().0
    }

    #[test]
    fn four_corners() {
        let z2 = unit_lattice(3);
        let idx = build_grid_index(&z2, 1.0).unwrap();
        let mut got: Vec<Vec<f64>> =
            idx.query_within(&[0.5, 0.5], 0.8).unwrap().into_iter().map(|p| p.to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn zero_radius_at_non_member() {
        let z2 = unit_lattice(2);
        let idx = build_grid_index(&z2, 1.0).unwrap();
        assert!(idx.query_within(&[0.5, 0.25], 0.0).unwrap().is_empty());
        assert_eq!(idx.query_within(&[1.0, 1.0], 0.0).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_cell_size() {
        let z2 = unit_lattice(1);
        assert!(build_grid_index(&z2, 0.0).is_err());
        assert!(build_grid_index(&z2, -1.0).is_err());
    }

    #[test]
    fn agrees_with_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let flat: Vec<f64> = (0..200).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let (set, _) = PointSet::from_flat(2, flat, Metric::Euclidean).unwrap();
        for cell in [0.3, 1.0, 4.0] {
            let idx = build_grid_index(&set, cell).unwrap();
            for _ in 0..50 {
                let q = [rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0)];
                let r = rng.gen_range(0.0..5.0);
                let got = idx.query_indices(&q, r).unwrap();
                let want: Vec<usize> =
                    (0..set.len()).filter(|&i| Metric::Euclidean.dist(set.point(i), &q) <= r).collect();
                assert_eq!(got, want);
            }
        }
    }
}
