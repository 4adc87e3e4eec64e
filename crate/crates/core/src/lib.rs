//! Exact enumeration and statistics of alternating sign matrix observables.
//!
//! Everything here is exact: integers are arbitrary precision and all
//! statistics are rationals. No floating point is used anywhere.

pub mod asm;
pub mod cli;
pub mod exact;
pub mod formulas;
pub mod stats;

/// Arbitrary-precision integer used throughout.
pub type Int = num::BigInt;

/// Arbitrary-precision rational, the universal scalar for statistics and formulas.
pub type Rational = num::BigRational;
