//! Diagnostics for strong A-statistical convergence of sequences in
//! probabilistic metric spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod levy;
pub mod pmspace;
pub mod scenario;
pub mod statconv;
pub mod summability;
pub mod summable;
pub mod trifn;
pub mod verdict;

pub use error::{Error, Result};
pub use levy::{distance_to_eps0, levy_distance, Ddf, LevyDistance};
pub use verdict::Verdict;
