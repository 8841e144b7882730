//! Combinatorics of Serre weight profiles, the monomial ideals they index,
//! Tor of Stanley–Reisner ideals, a truncated enveloping-algebra model and
//! the numerical predictions assembled from these pieces.
//!
//! All arithmetic is exact: polynomial coefficients are [`num_bigint::BigInt`]
//! and ranks are computed by fraction-free integer elimination.

pub mod cli;
pub mod error;
pub mod ideals;
pub mod linalg;
pub mod pbw;
pub mod predictions;
pub mod series;
pub mod tor;
pub mod weights;

pub use error::{Error, Result};
