//! Exact decision procedures for goodness and order-unit goodness of traces
//! on several families of dimension groups:
//!
//! * the ordered rings `R_P` attached to positive Laurent polynomials, at
//!   algebraic points in one variable ([`algebraic`]) and at rational points in
//!   any number of variables ([`laurent`]);
//! * strict direct sums of finitely generated subgroups of `R` ([`lattice`]);
//! * simplicial groups `Z^k` ([`simplicial`]);
//! * good subsets of finite-dimensional simplices ([`simplexgood`]).
//!
//! All arithmetic is exact. Every verdict carries a certificate that can be
//! re-checked independently.

pub mod algebraic;
pub mod arith;
mod error;
pub mod lattice;
pub mod laurent;
pub mod lp;
pub mod numfield;
pub mod par;
pub mod poly;
pub mod polytope;
pub mod simplexgood;
pub mod simplicial;
pub mod zmatrix;

pub use error::{Error, Result};
pub use par::Execution;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
