//! Generators for the example sets, with closed-form counters where they exist,
//! and point-file ingestion.

mod blocks;
mod gaussian;
mod ingest;
mod lattice;
mod power;
mod primes;
mod quadratic;
mod sieve;

pub use blocks::{dyadic_block, dyadic_blocks_count, gen_dyadic_blocks, BLOCKS_COUNT_LIMIT, BLOCKS_MATERIALIZE_LIMIT};
pub use gaussian::{
    gen_gaussian_irreducibles, gen_gaussian_irreducibles_counted, two_squares, GaussianClass,
    GaussianIrreducible, GaussianIrreducibles,
};
pub use ingest::{
    export_points, format_point, ingest_points, read_points, write_points, Ingested, PointFormat,
};
pub use lattice::{gen_lattice, lattice_count, LATTICE_POINT_BUDGET};
pub use power::{
    asdim_demo_cover, gen_power_set, power_count, power_value, AsdimCover, POWER_COUNT_LIMIT,
    POWER_POINT_BUDGET,
};
pub use primes::{gen_primes, gen_super_primes, primes_from_sieve, super_prime_values, super_primes_from_sieve};
pub use quadratic::{gen_quadratic_irreducibles, Elements, QuadraticInteger, QUADRATIC_NORM_BUDGET};
pub use sieve::{SieveCache, DEFAULT_SIEVE_BUDGET};
