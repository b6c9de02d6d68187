use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::sequence::{exception_indicator, SequenceSpec};
use super::StatConfig;
use crate::error::{domain, Result};
use crate::levy::{levy_distance, Ddf, DEFAULT_TOL};
use crate::pmspace::Point;
use crate::summability::{density_of_indicator, DensityEstimate, DensityVerdict, SummabilityMatrix};
use crate::verdict::Verdict;

/// Density estimate of one exception set `{k : gap_k ≥ t}`.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionDensity {
    pub t: f64,
    /// Members up to the sequence length.
    pub count: usize,
    pub estimate: DensityEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport<P> {
    pub candidate: P,
    pub matrix: String,
    pub truncation: usize,
    pub exceptions: Vec<ExceptionDensity>,
    pub verdict: Verdict,
}

/// Largest row usable with a sequence of length `len`, checked against the
/// minimum truncation.
pub(crate) fn truncation_for(a: &SummabilityMatrix, len: usize) -> Result<usize> {
    let n = a.row_limit(len);
    if n < 10 {
        return domain(format!(
            "sequence of length {len} supports only {n} rows of {}; at least 10 are needed",
            a.name()
        ));
    }
    Ok(n)
}

/// Exception-set densities of a precomputed distance vector at each `t`.
pub(crate) fn exception_densities(
    a: &SummabilityMatrix,
    distances: &[f64],
    truncation: usize,
    cfg: &StatConfig,
) -> Result<Vec<ExceptionDensity>> {
    cfg.t_grid
        .par_iter()
        .map(|&t| {
            let ind = exception_indicator(distances, t);
            let count = ind.iter().filter(|&&v| v > 0.0).count();
            let estimate = if count == 0 {
                DensityEstimate::exact_zero(truncation, &cfg.density)
            } else {
                density_of_indicator(a, &ind, truncation, &cfg.density)?
            };
            Ok(ExceptionDensity { t, count, estimate })
        })
        .collect()
}

/// Pass when every exception set reads as null, fail when any reads as
/// positive.
pub(crate) fn null_verdict(exceptions: &[ExceptionDensity]) -> Verdict {
    if exceptions.iter().all(|e| e.estimate.verdict == DensityVerdict::Zero) {
        Verdict::Pass
    } else if exceptions.iter().any(|e| e.estimate.verdict == DensityVerdict::Positive) {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    }
}

/// Whether `x` strongly A-statistically converges to `l`: for each `t` in
/// the grid, `δ_A({k : d_L(F_{x_k l}, ε_0) ≥ t}) = 0`.
pub fn stat_converges_to<P: Point>(
    x: &SequenceSpec<P>,
    l: &P,
    a: &SummabilityMatrix,
    cfg: &StatConfig,
) -> Result<ConvergenceReport<P>> {
    cfg.check()?;
    let truncation = truncation_for(a, x.len())?;
    let gaps = x.gaps_to(l);
    let exceptions = exception_densities(a, &gaps, truncation, cfg)?;
    Ok(ConvergenceReport {
        candidate: l.clone(),
        matrix: a.name().to_string(),
        truncation,
        verdict: null_verdict(&exceptions),
        exceptions,
    })
}

/// Runs [`stat_converges_to`] for every candidate. At most one can pass on a
/// grid whose spacing exceeds twice the smallest `t`.
pub fn limit_candidates<P: Point>(
    x: &SequenceSpec<P>,
    candidates: &[P],
    a: &SummabilityMatrix,
    cfg: &StatConfig,
) -> Result<Vec<(P, Verdict)>> {
    candidates.par_iter().map(|c| Ok((c.clone(), stat_converges_to(x, c, a, cfg)?.verdict))).collect()
}

/// Strong convergence read on a truncation: for each threshold, the last
/// index at or above it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCheck {
    pub horizon: usize,
    pub fraction: f64,
    /// `(t, last k with gap_k ≥ t)`.
    pub last_violations: Vec<(f64, Option<usize>)>,
    pub passed: bool,
}

/// Passes when, for every threshold, no index at or beyond
/// `fraction · horizon` has `gap_k ≥ t`.
pub fn tail_check(gaps: &[f64], thresholds: &[f64], horizon: usize, fraction: f64) -> TailCheck {
    let cutoff = fraction * horizon as f64;
    let last_violations: Vec<(f64, Option<usize>)> =
        thresholds.iter().map(|&t| (t, gaps.iter().rposition(|&g| g >= t).map(|i| i + 1))).collect();
    let passed = last_violations.iter().all(|(_, k)| k.is_none_or(|k| (k as f64) < cutoff));
    TailCheck { horizon, fraction, last_violations, passed }
}

/// [`tail_check`] of `x` against `l` over the whole sequence.
pub fn strong_tail_check<P: Point>(x: &SequenceSpec<P>, l: &P, cfg: &StatConfig) -> TailCheck {
    tail_check(&x.gaps_to(l), &cfg.t_grid, x.len(), cfg.tail_fraction)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub matrix: String,
    pub truncation: usize,
    /// Exception sets `{k : d_L(F_{x_k y_k}, F_pq) ≥ t}`.
    pub exceptions: Vec<ExceptionDensity>,
    pub verdict: Verdict,
}

/// `d_L(F_{x_k y_k}, F_pq)` for every `k`, computed once per distinct pair
/// of values when both sequences have code tables.
pub(crate) fn pair_distances<P: Point>(x: &SequenceSpec<P>, y: &SequenceSpec<P>, target: &Ddf) -> Result<Vec<f64>> {
    let space = x.space();
    let levy = |a: &P, b: &P| levy_distance(&space.distance(a, b), target, DEFAULT_TOL).map(|d| d.value);
    match (x.value_codes(), y.value_codes()) {
        (Some(cx), Some(cy)) => {
            let mut cache: HashMap<(u16, u16), f64> = HashMap::new();
            cx.codes
                .iter()
                .zip(&cy.codes)
                .map(|(&i, &j)| match cache.get(&(i, j)) {
                    Some(&d) => Ok(d),
                    None => {
                        let d = levy(&cx.values[i as usize], &cy.values[j as usize])?;
                        cache.insert((i, j), d);
                        Ok(d)
                    }
                })
                .collect()
        }
        _ => x.points().par_iter().zip(y.points().par_iter()).map(|(a, b)| levy(a, b)).collect(),
    }
}

/// Whether `F_{x_k y_k} → F_pq` statistically in `(D⁺, d_L)`.
pub fn pairwise_distance_convergence<P: Point>(
    x: &SequenceSpec<P>,
    y: &SequenceSpec<P>,
    p: &P,
    q: &P,
    a: &SummabilityMatrix,
    cfg: &StatConfig,
) -> Result<PairReport> {
    cfg.check()?;
    if x.len() != y.len() {
        return domain(format!("paired sequences differ in length ({} vs {})", x.len(), y.len()));
    }
    let truncation = truncation_for(a, x.len())?;
    let distances = pair_distances(x, y, &x.space().distance(p, q))?;
    let exceptions = exception_densities(a, &distances, truncation, cfg)?;
    Ok(PairReport { matrix: a.name().to_string(), truncation, verdict: null_verdict(&exceptions), exceptions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmspace::PmSpace;
    use crate::summability::IndexSet;
    use crate::trifn::TriangleFunction;

    fn reals() -> PmSpace<f64> {
        PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min())
    }

    fn squares_perturbed(n: usize) -> SequenceSpec<f64> {
        let sq = IndexSet::squares();
        SequenceSpec::new(reals(), "squares", n, move |k| if sq.contains(k) { 5.0 } else { 0.0 })
    }

    #[test]
    fn constant_sequence_converges_with_empty_exceptions() {
        let x = SequenceSpec::new(reals(), "const", 10_000, |_| 0.0);
        let r = stat_converges_to(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.exceptions.iter().all(|e| e.count == 0));
        assert_eq!(r.exceptions.len(), 5);
    }

    #[test]
    fn square_perturbation_is_invisible() {
        let x = squares_perturbed(100_000);
        let r = stat_converges_to(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.exceptions[0].count, 316);
        let strong = strong_tail_check(&x, &0.0, &StatConfig::default());
        assert!(!strong.passed);
    }

    #[test]
    fn alternating_sequence_diverges_at_half() {
        let x = SequenceSpec::new(reals(), "alt", 10_000, |k| if k % 2 == 0 { 0.0 } else { 0.3 });
        let r = stat_converges_to(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        for e in &r.exceptions {
            let expect = if e.t <= 0.3 { 0.5 } else { 0.0 };
            assert!((e.estimate.value - expect).abs() < 1e-3, "t = {}: {}", e.t, e.estimate.value);
        }
    }

    #[test]
    fn only_one_candidate_passes() {
        let x = squares_perturbed(100_000);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let v = limit_candidates(&x, &grid, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        let passing: Vec<f64> = v.iter().filter(|c| c.1.is_pass()).map(|c| c.0).collect();
        assert_eq!(passing, vec![0.0]);
    }

    #[test]
    fn tail_check_reads_last_violation() {
        let gaps = [1.0, 0.3, 0.0, 0.0, 0.06, 0.0, 0.0, 0.0, 0.0, 0.0];
        let c = tail_check(&gaps, &[0.5, 0.05], 10, 0.5);
        assert_eq!(c.last_violations, vec![(0.5, Some(1)), (0.05, Some(5))]);
        assert!(!c.passed);
        assert!(tail_check(&gaps, &[0.5, 0.2], 10, 0.5).passed);
    }

    #[test]
    fn paired_constants_have_no_exceptions() {
        let x = SequenceSpec::new(reals(), "p", 1000, |_| 1.0);
        let y = SequenceSpec::new(reals(), "q", 1000, |_| 3.0);
        let r = pairwise_distance_convergence(&x, &y, &1.0, &3.0, &SummabilityMatrix::cesaro(), &StatConfig::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.exceptions.iter().all(|e| e.count == 0));
    }

    #[test]
    fn short_sequences_are_rejected() {
        let x = SequenceSpec::new(reals(), "short", 5, |_| 0.0);
        assert!(stat_converges_to(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).is_err());
    }
}
