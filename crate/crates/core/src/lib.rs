//! Large-scale dimensions of discrete point sets.
//!
//! * [`geometry`]: points, metrics, balls, exact ball counts and a grid index.
//! * [`covering`]: r-nets and covering-number brackets `N(E, r)`.
//! * [`generators`]: lattices, primes, super primes, Gaussian and quadratic
//!   irreducibles, power sets, dyadic blocks and point files.
//! * [`dimension`]: counting profiles, zeta and box estimates, zeta series,
//!   Assouad certificates and quasi-isometric images.
//! * [`patches`]: arithmetic patches, their search and the threshold bounds.
//!
//! Everything is generic over the coordinate scalar (`f32` or `f64`); the
//! aliases below fix `f64`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod dimension;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod patches;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point64 = geometry::Point<f64>;
pub type PointSet64 = geometry::PointSet<f64>;
pub type Net64 = covering::Net<f64>;
pub type CountingProfile64 = dimension::CountingProfile<f64>;
pub type ArithmeticPatch64 = patches::ArithmeticPatch<f64>;
pub type PatchReport64 = patches::PatchReport<f64>;
pub type Witness64 = patches::Witness<f64>;

pub type Point32 = geometry::Point<f32>;
pub type PointSet32 = geometry::PointSet<f32>;
