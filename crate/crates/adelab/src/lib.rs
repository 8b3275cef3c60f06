//! Exact-arithmetic toolkit for ADE root lattices and the combinatorics of
//! ADE / affine-ADE surface shapes: Weyl characters, shape catalogues with
//! priming and degenerations, naive and canonical branch-curve families with
//! verified discriminant identities, generalized Coxeter fans, and the
//! root-sublattice realizability classifier.
//!
//! Everything here is exact: `BigRational` coefficients, integer lattice
//! coordinates, no floating point anywhere.

pub mod error;
pub mod lattice;
pub mod grpalg;
pub mod poly;
pub mod characters;
pub mod shapes;
pub mod families;
pub mod discr;
pub mod fan;

pub use error::Error;

/// Convenient alias used across all modules.
pub type Rat = num_rational::BigRational;

/// Shorthand for building a `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(n))
}

/// Shorthand for a rational n/d.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(num_bigint::BigInt::from(n), num_bigint::BigInt::from(d))
}
