//! Exact arithmetic for truncated q-expansions and the modular-form
//! constructions needed to verify Ramanujan-type congruences
//! `cphi_m(ln + beta) = 0 (mod l)` of the m-colored Frobenius partition
//! functions for m in {5, 7, 11, 13}.
//!
//! The crate is `no_std` (with `alloc`); all coefficients are exact
//! (big integers, big rationals, or residues mod an odd prime).
//! IO, caching, and the command-line driver live in the companion
//! `cphi-cli` crate.
//!
//! Module map:
//! - [`series`]: truncated power series on the 1/24 exponent grid with the
//!   theta and U_l operators.
//! - [`eta`]: eta-quotient expansions, cusp-order and Sturm-bound formulas.
//! - [`frob`]: representation numbers, the cphi_m series, the cusp form
//!   h_l, and the b/epsilon vectors.
//! - [`bases`]: explicit cusp-form bases for levels 5, 7, 11, 13 and the
//!   X_0(11) function-field model.
//! - [`filtration`]: Eisenstein series, the Ramanujan-Serre derivative,
//!   mod-l filtrations, and theta cycles.
//! - [`search`]: the exhaustive epsilon-vector search with residual-gcd
//!   candidate extraction and survivor classification.

#![no_std]
// index loops mirror the row/column arithmetic in the linear algebra here
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod bases;
pub mod error;
pub mod eta;
pub mod factor;
pub mod filtration;
pub mod frob;
pub mod search;
pub mod series;

pub use error::Error;
pub use series::{QExpansion, Ring};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
