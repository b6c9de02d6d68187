//! Strong A-statistical convergence, Cauchyness, limit points and cluster
//! points of sequences in a PM space.
//!
//! Every diagnostic reduces to densities of index sets cut out by the gap
//! `d_L(F_{x_k p}, ε_0)`: the exception set `{k : gap ≥ t}` for convergence,
//! the hit set `{k : gap < t}` for cluster points. Densities are read on a
//! truncation, so verdicts are three-valued.
//!
//! Two instantiations of the Cauchy distance are provided: the gap between
//! sequence terms for sequences of points, and the Lévy distance between
//! distance functions for the sequence `F_{x_k y_k}` in `(D⁺, d_L)`.

mod cauchy;
mod clusters;
mod construction;
mod convergence;
mod sequence;

use serde::Serialize;

use crate::summability::DensityConfig;

pub use cauchy::{cauchy_exceptional_set, is_stat_cauchy, levy_cauchy, CauchyGamma, CauchyReport, ExceptionalSet};
pub use clusters::{
    cluster_points, compact_disjoint_check, gamma_closure_check, is_stat_bounded, limit_points, BoundedReport,
    CandidateScan, ClusterReport, LimitSearch,
};
pub use construction::{extract_full_density_subsequence, splice_on_null_set, FullDensitySubsequence};
pub use convergence::{
    limit_candidates, pairwise_distance_convergence, stat_converges_to, strong_tail_check, tail_check,
    ConvergenceReport, ExceptionDensity, PairReport, TailCheck,
};
pub use sequence::{exception_indicator, hit_indicator, SequenceSpec, ValueCodes, DISTINCT_CAP};

/// Default thresholds `t` at which exception and hit sets are examined.
pub const DEFAULT_T_GRID: [f64; 5] = [0.5, 0.2, 0.1, 0.05, 0.02];

/// Settings shared by the statistical diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatConfig {
    pub density: DensityConfig,
    /// Thresholds for exception, hit and Cauchy sets.
    pub t_grid: Vec<f64>,
    /// Deepest stage `t` of the shrinking schedule `1/t` in constructions.
    pub t_max: usize,
    /// A tail check passes when the last index violating a threshold lies
    /// below this fraction of the truncation.
    pub tail_fraction: f64,
    /// Number of anchors `j` sampled for the nested Cauchy statistic.
    pub nested_grid: usize,
}

impl Default for StatConfig {
    fn default() -> Self {
        StatConfig {
            density: DensityConfig::default(),
            t_grid: DEFAULT_T_GRID.to_vec(),
            t_max: 64,
            tail_fraction: 0.5,
            nested_grid: 200,
        }
    }
}

impl StatConfig {
    pub(crate) fn check(&self) -> crate::Result<()> {
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0)) {
            return crate::error::domain(format!("t grid {:?} must be nonempty and positive", self.t_grid));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return crate::error::domain(format!("tail fraction {} must lie in (0, 1]", self.tail_fraction));
        }
        Ok(())
    }
}
