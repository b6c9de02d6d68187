use std::fmt;

use serde::Serialize;

use super::density::{probe_schedule, DensityConfig};
use super::matrix::SummabilityMatrix;
use crate::error::{domain, Result};

/// Row absolute sums above this are flagged outright under condition (i).
pub const NORM_BOUND: f64 = 1e6;

/// Columns inspected under condition (ii).
pub const PROBE_COLUMNS: usize = 10;

/// The three Silverman–Toeplitz conditions for a nonnegative matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// `sup_n Σ_k |a_nk| < ∞`.
    BoundedRows,
    /// `a_nk → 0` for every fixed `k`.
    VanishingColumns,
    /// `Σ_k a_nk → 1`.
    UnitRowSums,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::BoundedRows => "(i) bounded row sums",
            Condition::VanishingColumns => "(ii) vanishing columns",
            Condition::UnitRowSums => "(iii) row sums tend to 1",
        })
    }
}

/// Truncated evidence for or against regularity.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub matrix: String,
    pub truncation: usize,
    pub tol: f64,
    /// Largest row absolute sum for `n ≤ N` and the row attaining it.
    pub max_row_sum: f64,
    pub max_row: usize,
    /// Largest trailing-window entry per probed column `k = 1, 2, …`.
    pub column_tails: Vec<(usize, f64)>,
    /// Trailing-window mean and worst deviation of the row sums from 1.
    pub row_sum_mean: f64,
    pub row_sum_deviation: f64,
    pub violations: Vec<Condition>,
}

impl RegularityReport {
    pub fn consistent_with_regular(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, c: Condition) -> bool {
        self.violations.contains(&c)
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {} at N = {} (tol {:e})", self.matrix, self.truncation, self.tol)?;
        writeln!(f, "  (i)   max row sum {:.6} at row {}", self.max_row_sum, self.max_row)?;
        let worst = self.column_tails.iter().map(|c| c.1).fold(0.0, f64::max);
        writeln!(f, "  (ii)  largest trailing column entry {worst:.3e} over k ≤ {}", self.column_tails.len())?;
        writeln!(
            f,
            "  (iii) trailing row sum mean {:.9}, worst deviation {:.3e}",
            self.row_sum_mean, self.row_sum_deviation
        )?;
        if self.violations.is_empty() {
            writeln!(f, "  consistent with regular")?;
        } else {
            for v in &self.violations {
                writeln!(f, "  violates {v}")?;
            }
        }
        write!(f, "  evidence from a finite truncation only; not a proof of regularity")
    }
}

/// Inspects rows `n ≤ N` for the Silverman–Toeplitz conditions.
///
/// Limits are read from the trailing window of the geometric probe schedule
/// in `cfg`. Condition (i) is flagged when some row sum exceeds
/// [`NORM_BOUND`] or the trailing row sums more than double from the start
/// of the window to its end.
pub fn check_regularity(a: &SummabilityMatrix, n: usize, tol: f64, cfg: &DensityConfig) -> Result<RegularityReport> {
    if n < 10 {
        return domain(format!("regularity check needs N ≥ 10, got {n}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let len = a.support_end(n).max(n);
    let ones = vec![1.0; len];
    let summer = a.summer(&ones);

    let mut max_row_sum = 0.0_f64;
    let mut max_row = 1;
    for m in 1..=n {
        let s = summer.sum(m)?;
        if s > max_row_sum {
            max_row_sum = s;
            max_row = m;
        }
    }

    let probes = probe_schedule(n, cfg.ratio);
    let window = &probes[probes.len() - cfg.window.min(probes.len())..];
    let sums: Vec<f64> = window.iter().map(|&m| summer.sum(m)).collect::<Result<_>>()?;
    let row_sum_mean = sums.iter().sum::<f64>() / sums.len() as f64;
    let row_sum_deviation = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);

    let column_tails: Vec<(usize, f64)> =
        (1..=PROBE_COLUMNS).map(|k| (k, window.iter().map(|&m| a.entry(m, k)).fold(0.0, f64::max))).collect();

    let mut violations = Vec::new();
    let growing = sums.first().is_some_and(|&s0| sums.last().is_some_and(|&s1| s1 > 2.0 * s0.max(tol)));
    if max_row_sum > NORM_BOUND || growing {
        violations.push(Condition::BoundedRows);
    }
    if column_tails.iter().any(|c| c.1 > tol) {
        violations.push(Condition::VanishingColumns);
    }
    if row_sum_deviation > tol {
        violations.push(Condition::UnitRowSums);
    }
    Ok(RegularityReport {
        matrix: a.name().to_string(),
        truncation: n,
        tol,
        max_row_sum,
        max_row,
        column_tails,
        row_sum_mean,
        row_sum_deviation,
        violations,
    })
}
