//! Nonnegative summability matrices, index sets and A-densities.
//!
//! A matrix is given row by row. Most rows used in practice are a band of
//! consecutive columns with entries `w(k) · c_n`, which lets set masses
//! `Σ_{k ∈ B} a_nk` come from one prefix-sum pass and cost O(1) per row.
//!
//! Row definitions of the builders:
//!
//! | id | `a_nk` |
//! |----|--------|
//! | `cesaro` | `1/n` for `k ≤ n` |
//! | `riesz:<p>` | `p_k / (p_1 + … + p_n)` for `k ≤ n` |
//! | `lambda:<λ>` | `1/λ_n` for `n - λ_n < k ≤ n` |
//! | `lacunary:<q>` | `1/h_r` for `k_(r-1) < k ≤ k_r`, the block holding `n` |
//! | `abel` | `(1-r) r^(k-1)`, `r = 1 - 1/n`, truncated where the tail drops below 1e-12 |
//!
//! Densities are limits and a truncation can only suggest them: every
//! [`DensityEstimate`] records its truncation, its trailing oscillation and
//! a three-way reading (zero, positive, undecided). Reading "not density
//! zero" as a trailing minimum above `nonthin_floor` is a convention of this
//! crate, not a definition.

mod density;
mod index;
mod matrix;
mod regularity;

pub use density::{
    density, density_algebra_checks, density_of_indicator, probe_schedule, DensityAlgebraReport, DensityConfig,
    DensityEstimate, DensityStatus, DensityVerdict,
};
pub use index::{IndexSet, BUILTIN_INDEX_SETS};
pub use matrix::{ceil_sqrt, lacunary_block, Row, RowSummer, SummabilityMatrix, BUILTIN_MATRICES, TAIL_BOUND};
pub use regularity::{check_regularity, Condition, RegularityReport, NORM_BOUND, PROBE_COLUMNS};
