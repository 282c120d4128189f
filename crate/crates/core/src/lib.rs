//! Exact computation of graded cohomology algebras presented by degree-one
//! generators and quadratic relations, their symmetric-group characters, and
//! representation-stability diagnostics.
//!
//! * [`symcomb`]: partitions, permutations, irreducible characters, class
//!   functions and character polynomials.
//! * [`exactla`]: sparse linear algebra over the rationals.
//! * [`algebra`]: the six presented families and their graded pieces.
//! * [`repstab`]: characters of graded pieces, decompositions, weight,
//!   generation degree, coinvariants and polynomial fits.

pub mod algebra;
pub mod exactla;
pub mod rational;
pub mod repstab;
pub mod symcomb;

pub use rational::Rational;

/// Stamped on cached artifacts; bump when results could change.
pub const ENGINE_VERSION: &str = concat!("repstab-core/", env!("CARGO_PKG_VERSION"));

use symcomb::Partition;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("cannot pad {partition} to n = {n}: need n >= |lambda| + lambda_1")]
    PaddingInvalid { partition: Partition, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not invariant: image of basis column {column} leaves the span")]
    NotInvariant { column: usize },
    #[error("no polynomial of degree <= {max_deg} fits the data")]
    Infeasible { max_deg: usize },
    #[error("underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("inconsistent data: no character polynomial of the requested degree fits")]
    Inconsistent,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("generator expects {expected} indices, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("label {label} outside [1, {n}]")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("map is not injective: {0:?}")]
    NotInjective(Vec<usize>),
    #[error("{0}")]
    Unsupported(String),
    #[error("size guard: {what} (ambient dimension {ambient_dim} exceeds limit {limit})")]
    SizeGuard { what: String, ambient_dim: u128, limit: u128 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
