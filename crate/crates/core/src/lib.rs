//! Exact combinatorics for the largest family of subsets of `[n]` that
//! contains neither `Y_k` nor `Y'_k` on consecutive levels of the Boolean
//! lattice.
//!
//! * [`ramus`]: binomial and lacunary sums, truncated sums, dual weights.
//! * [`lattice`]: subset families, copy detection, the residue-avoiding
//!   construction.
//! * [`cyclegraph`]: cyclic permutations, interval lattices, the double
//!   count, and exhaustive audits of the per-permutation window bounds.
//! * [`search`]: exact branch-and-bound for the extremal size.
//! * [`certificate`]: the weighted-window dual certificate, checked exactly.

pub mod certificate;
pub mod copies;
pub mod cyclegraph;
mod decimal;
pub mod error;
pub mod lattice;
pub mod ramus;
pub mod search;

pub use error::{Error, Result};
pub use lattice::{SetFamily, SubsetMask};
pub use ramus::{ExactInt, RamusParams};
