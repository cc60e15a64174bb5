//! Points, metrics, balls, minimum gaps and a hash-grid spatial index.

mod grid;
mod metric;
mod point;
mod pointset;

pub use grid::{build_grid_index, GridIndex};
pub(crate) use grid::{cell_of, CellKey};
pub use metric::{distance, Metric};
pub use point::{lex_cmp, Point};
pub use pointset::{product_set, ExactCounter, PointSet};

use crate::error::Result;
use crate::scalar::Scalar;

/// `|B(center, R) ∩ F|` for the closed ball.
pub fn ball_count<S: Scalar>(set: &PointSet<S>, center: &[S], radius: S) -> Result<u64> {
    set.ball_count(center, radius)
}

/// Minimum pairwise distance of a sample with at least two points.
pub fn min_gap<S: Scalar>(set: &PointSet<S>) -> Result<S> {
    set.min_gap()
}
