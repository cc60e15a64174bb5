use std::ops::Deref;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// A point of `R^d` with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        Ok(Point { coords })
    }

    /// Builds a point from `f64` coordinates, converting into `S`.
    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| S::of(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point { coords: vec![S::zero(); dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl<S> Deref for Point<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.coords
    }
}

/// Lexicographic comparison of coordinate slices; coordinates are finite.
pub fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite coordinates") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Point::<f64>::new(vec![]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
        assert!(Point::new(vec![1.0f32, 2.0]).is_ok());
    }

    #[test]
    fn origin_detection() {
        assert!(Point::<f64>::origin(3).is_origin());
        assert!(!Point::from_f64(&[0.0, 1e-300]).map(|p: Point<f64>| p.is_origin()).unwrap());
    }
}
