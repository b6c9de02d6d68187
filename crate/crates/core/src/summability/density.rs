use serde::Serialize;

use super::index::IndexSet;
use super::matrix::SummabilityMatrix;
use crate::error::{domain, Result};
use crate::verdict::Verdict;

/// Knobs for limit estimation on a geometric probe schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityConfig {
    /// Probes are `⌈N / ratio^i⌉`.
    pub ratio: f64,
    /// Number of trailing probes the limit is read from.
    pub window: usize,
    /// Largest trailing oscillation counted as converged.
    pub osc_tol: f64,
    /// Every trailing value at or below this reads as density zero.
    pub zero_tol: f64,
    /// Every trailing value at or above this reads as positive density.
    pub nonthin_floor: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig { ratio: 1.25, window: 12, osc_tol: 5e-3, zero_tol: 2e-2, nonthin_floor: 0.01 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityStatus {
    Converged,
    Indeterminate,
}

/// Reading of a density estimate as zero / positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityVerdict {
    Zero,
    Positive,
    Indeterminate,
}

/// A truncated limit estimate of `lim_n s_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub status: DensityStatus,
    pub verdict: DensityVerdict,
    /// Mean of the trailing window; meaningful as a limit only when converged.
    pub value: f64,
    /// `(n, s_n)` at every probe, ascending in `n`.
    pub partial_sums: Vec<(usize, f64)>,
    pub truncation: usize,
    /// Max minus min over the trailing window.
    pub oscillation: f64,
    pub window_min: f64,
    pub window_max: f64,
    /// Fewer probes than the configured window were available.
    pub short_window: bool,
}

impl DensityEstimate {
    /// Estimate from partial sums already evaluated on a probe schedule.
    pub fn from_partial_sums(partial_sums: Vec<(usize, f64)>, cfg: &DensityConfig) -> Self {
        let truncation = partial_sums.last().map_or(0, |p| p.0);
        let take = cfg.window.min(partial_sums.len());
        let tail = &partial_sums[partial_sums.len() - take..];
        let (mut lo, mut hi, mut total) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &(_, s) in tail {
            lo = lo.min(s);
            hi = hi.max(s);
            total += s;
        }
        if tail.is_empty() {
            (lo, hi) = (0.0, 0.0);
        }
        let oscillation = hi - lo;
        let status = if oscillation <= cfg.osc_tol && !tail.is_empty() {
            DensityStatus::Converged
        } else {
            DensityStatus::Indeterminate
        };
        let verdict = if tail.is_empty() {
            DensityVerdict::Indeterminate
        } else if hi <= cfg.zero_tol {
            DensityVerdict::Zero
        } else if lo >= cfg.nonthin_floor {
            DensityVerdict::Positive
        } else {
            DensityVerdict::Indeterminate
        };
        DensityEstimate {
            status,
            verdict,
            value: if tail.is_empty() { 0.0 } else { total / take as f64 },
            truncation,
            oscillation,
            window_min: lo,
            window_max: hi,
            short_window: take < cfg.window,
            partial_sums,
        }
    }

    /// The estimate of the empty set: identically zero.
    pub fn exact_zero(truncation: usize, cfg: &DensityConfig) -> Self {
        let probes = probe_schedule(truncation, cfg.ratio);
        Self::from_partial_sums(probes.into_iter().map(|n| (n, 0.0)).collect(), cfg)
    }

    pub fn is_zero(&self) -> bool {
        self.verdict == DensityVerdict::Zero
    }

    pub fn is_positive(&self) -> bool {
        self.verdict == DensityVerdict::Positive
    }

    /// Pass when the density reads as zero, fail when positive.
    pub fn zero_verdict(&self) -> Verdict {
        match self.verdict {
            DensityVerdict::Zero => Verdict::Pass,
            DensityVerdict::Positive => Verdict::Fail,
            DensityVerdict::Indeterminate => Verdict::Indeterminate,
        }
    }
}

/// `{⌈N / ratio^i⌉ : i ≥ 0}`, ascending and deduplicated.
pub fn probe_schedule(n: usize, ratio: f64) -> Vec<usize> {
    assert!(ratio > 1.0, "probe ratio must exceed 1");
    let mut out = Vec::new();
    let mut x = n as f64;
    while x >= 1.0 {
        let p = x.ceil() as usize;
        if out.last() != Some(&p) {
            out.push(p);
        }
        x /= ratio;
    }
    out.reverse();
    out
}

/// Estimates `δ_A(B) = lim_n Σ_{k ∈ B} a_nk` from rows `n ≤ truncation`.
pub fn density(a: &SummabilityMatrix, b: &IndexSet, truncation: usize, cfg: &DensityConfig) -> Result<DensityEstimate> {
    check_truncation(truncation, cfg)?;
    let len = a.support_end(truncation).max(truncation);
    density_of_indicator(a, &b.indicator(len), truncation, cfg)
}

/// Like [`density`] for a set given by its 0/1 indicator over `1..=len`.
pub fn density_of_indicator(
    a: &SummabilityMatrix,
    indicator: &[f64],
    truncation: usize,
    cfg: &DensityConfig,
) -> Result<DensityEstimate> {
    check_truncation(truncation, cfg)?;
    let summer = a.summer(indicator);
    let sums = probe_schedule(truncation, cfg.ratio)
        .into_iter()
        .map(|n| {
            let s = summer.sum(n)?;
            debug_assert!(s >= -1e-12, "negative set mass {s} at row {n}");
            Ok((n, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityEstimate::from_partial_sums(sums, cfg))
}

fn check_truncation(truncation: usize, cfg: &DensityConfig) -> Result<()> {
    if truncation < 10 {
        return domain(format!("truncation {truncation} is below the minimum of 10"));
    }
    if cfg.window == 0 || !(cfg.ratio > 1.0) {
        return domain("density window must be positive and probe ratio above 1");
    }
    Ok(())
}

/// Checks that null sets behave like an ideal: the union of two null sets is
/// null and the complement of a null set has density one.
#[derive(Clone, Debug)]
pub struct DensityAlgebraReport {
    pub first: DensityEstimate,
    pub second: DensityEstimate,
    pub union: DensityEstimate,
    pub complement: DensityEstimate,
    /// Union estimate at most the sum of the two estimates plus `osc_tol`.
    pub union_subadditive: Verdict,
    /// Complement of the first set reads as density one.
    pub complement_full: Verdict,
    /// Largest `|s_n(B) + s_n(Bᶜ) - Σ_k a_nk|` over the probes.
    pub split_error: f64,
}

impl DensityAlgebraReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all([self.union_subadditive, self.complement_full])
    }
}

pub fn density_algebra_checks(
    a: &SummabilityMatrix,
    b: &IndexSet,
    c: &IndexSet,
    truncation: usize,
    cfg: &DensityConfig,
) -> Result<DensityAlgebraReport> {
    let first = density(a, b, truncation, cfg)?;
    let second = density(a, c, truncation, cfg)?;
    let union = density(a, &b.union(c), truncation, cfg)?;
    let complement = density(a, &b.complement(), truncation, cfg)?;
    let split_error = first
        .partial_sums
        .iter()
        .zip(&complement.partial_sums)
        .map(|(&(n, x), &(_, y))| (x + y - a.row_sum(n)).abs())
        .fold(0.0, f64::max);
    let inputs_null = first.is_zero() && second.is_zero();
    let (union_subadditive, complement_full) = if inputs_null {
        (
            Verdict::from_bool(union.value <= first.value + second.value + cfg.osc_tol && union.is_zero()),
            Verdict::from_bool(complement.window_min >= 1.0 - cfg.zero_tol),
        )
    } else {
        (Verdict::Indeterminate, Verdict::Indeterminate)
    };
    Ok(DensityAlgebraReport { first, second, union, complement, union_subadditive, complement_full, split_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cesaro_oracle(b: &IndexSet, n: usize) -> f64 {
        b.count_upto(n) as f64 / n as f64
    }

    #[test]
    fn probe_schedule_shape() {
        let p = probe_schedule(100_000, 1.25);
        assert_eq!(*p.last().unwrap(), 100_000);
        assert!(p[0] <= 2);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p[p.len() - 2], 80_000);
        assert_eq!(probe_schedule(10, 1.25), vec![2, 3, 4, 5, 6, 7, 8, 10]);
    }

    #[test]
    fn evens_have_half_density() {
        let cfg = DensityConfig::default();
        let a = SummabilityMatrix::cesaro();
        let e = density(&a, &IndexSet::evens(), 100_000, &cfg).unwrap();
        assert_eq!(e.status, DensityStatus::Converged);
        assert_eq!(e.verdict, DensityVerdict::Positive);
        assert!((e.value - 0.5).abs() < 1e-3);
        for &(n, s) in &e.partial_sums {
            assert!((s - cesaro_oracle(&IndexSet::evens(), n)).abs() < 1e-12);
        }
    }

    #[test]
    fn squares_read_as_zero() {
        let cfg = DensityConfig::default();
        let a = SummabilityMatrix::cesaro();
        let e = density(&a, &IndexSet::squares(), 100_000, &cfg).unwrap();
        assert!(e.is_zero());
        assert!(e.value < 2e-2);
        for &(n, s) in &e.partial_sums {
            assert!((s - (n.isqrt() as f64) / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn whole_set_under_regular_matrices() {
        let cfg = DensityConfig::default();
        for id in ["cesaro", "riesz:linear", "lambda:half", "lacunary:2", "abel"] {
            let a = SummabilityMatrix::from_id(id).unwrap();
            let e = density(&a, &IndexSet::All, 5_000, &cfg).unwrap();
            assert!((e.value - 1.0).abs() < 1e-9, "{id}: {}", e.value);
            assert_eq!(e.status, DensityStatus::Converged);
        }
    }

    #[test]
    fn finite_sets_vanish() {
        let cfg = DensityConfig::default();
        let b = IndexSet::explicit([1, 2, 3, 50, 99]);
        for id in ["cesaro", "riesz:sqrt", "lambda:sqrt", "lacunary:1.5"] {
            let a = SummabilityMatrix::from_id(id).unwrap();
            let e = density(&a, &b, 20_000, &cfg).unwrap();
            assert!(e.is_zero() && e.oscillation <= cfg.osc_tol, "{id}");
        }
    }

    #[test]
    fn oscillating_set_is_indeterminate() {
        // Alternating dyadic blocks: Cesàro means swing between 1/3 and 2/3.
        let b = IndexSet::predicate("dyadic-alternating", |k| (usize::BITS - k.leading_zeros()) % 2 == 0);
        let e = density(&SummabilityMatrix::cesaro(), &b, 100_000, &DensityConfig::default()).unwrap();
        assert_eq!(e.status, DensityStatus::Indeterminate);
        assert_eq!(e.verdict, DensityVerdict::Positive);
        assert!(e.oscillation > 0.2);
    }

    #[test]
    fn algebra_of_null_sets() {
        let cfg = DensityConfig::default();
        let a = SummabilityMatrix::cesaro();
        let r = density_algebra_checks(&a, &IndexSet::squares(), &IndexSet::cubes(), 100_000, &cfg).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert!(r.split_error < 1e-12);
        let empty = density(&a, &IndexSet::Empty, 1000, &cfg).unwrap();
        assert_eq!(empty.value, 0.0);
        let r = density_algebra_checks(&a, &IndexSet::evens(), &IndexSet::cubes(), 10_000, &cfg).unwrap();
        assert_eq!(r.verdict(), Verdict::Indeterminate);
    }

    #[test]
    fn rejects_tiny_truncation() {
        let cfg = DensityConfig::default();
        assert!(density(&SummabilityMatrix::cesaro(), &IndexSet::All, 5, &cfg).is_err());
    }
}
