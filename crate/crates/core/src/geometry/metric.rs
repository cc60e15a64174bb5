use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distance on `R^d`.
///
/// `SupProduct` splits the coordinates into consecutive Euclidean blocks and
/// takes the maximum of the block distances. It arises only from
/// [`product_set`](super::product_set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    SupProduct(Vec<usize>),
}

impl Metric {
    /// Checks that the metric can measure points of dimension `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Metric::Euclidean => Ok(()),
            Metric::SupProduct(blocks) => {
                let total: usize = blocks.iter().sum();
                if total == dim && blocks.iter().all(|&b| b > 0) {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch { expected: total, found: dim })
                }
            }
        }
    }

    /// Euclidean block sizes of the metric on a space of dimension `dim`.
    pub fn blocks(&self, dim: usize) -> Vec<usize> {
        match self {
            Metric::Euclidean => vec![dim],
            Metric::SupProduct(b) => b.clone(),
        }
    }

    /// Largest Euclidean block; a cube of side `s` has diameter `s * sqrt(widest_block)`.
    pub fn widest_block(&self, dim: usize) -> usize {
        self.blocks(dim).into_iter().max().unwrap_or(dim)
    }

    /// Unchecked distance; callers guarantee matching dimensions.
    #[inline]
    pub fn dist<S: Scalar>(&self, p: &[S], q: &[S]) -> S {
        match self {
            Metric::Euclidean => euclid(p, q),
            Metric::SupProduct(blocks) => {
                let mut best = S::zero();
                let mut at = 0;
                for &b in blocks {
                    let d = euclid(&p[at..at + b], &q[at..at + b]);
                    if d > best {
                        best = d;
                    }
                    at += b;
                }
                best
            }
        }
    }

    /// Distance from the origin.
    #[inline]
    pub fn norm<S: Scalar>(&self, p: &[S]) -> S {
        match self {
            Metric::Euclidean => p.iter().map(|&c| c * c).sum::<S>().sqrt(),
            Metric::SupProduct(blocks) => {
                let mut best = S::zero();
                let mut at = 0;
                for &b in blocks {
                    let d = p[at..at + b].iter().map(|&c| c * c).sum::<S>().sqrt();
                    if d > best {
                        best = d;
                    }
                    at += b;
                }
                best
            }
        }
    }
}

#[inline]
fn euclid<S: Scalar>(p: &[S], q: &[S]) -> S {
    if p.len() == 1 {
        return (p[0] - q[0]).abs();
    }
    p.iter()
        .zip(q)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<S>()
        .sqrt()
}

/// Distance between two points under `metric`.
pub fn distance<S: Scalar>(p: &[S], q: &[S], metric: &Metric) -> Result<S> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    metric.check_dim(p.len())?;
    Ok(metric.dist(p, q))
}
