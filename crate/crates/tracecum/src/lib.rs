//! Cumulants of traces of polynomials in Wigner and deterministic matrices.
//!
//! Exact evaluation goes through the partition expansion over ±[m]
//! ([`expansion`]), with the combinatorics in [`partitions`] and the graph
//! exponents that control the N-order in [`graphs`]. [`randmat`] and
//! [`montecarlo`] provide the sampling side used for cross-checks and
//! central-limit diagnostics.

pub mod error;
pub mod numeric;
pub mod graphs;
pub mod partitions;
pub mod expansion;
pub mod randmat;
pub mod montecarlo;

pub use error::{Error, Result};
