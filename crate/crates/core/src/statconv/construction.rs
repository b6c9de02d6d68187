use serde::Serialize;

use super::convergence::{tail_check, truncation_for, TailCheck};
use super::sequence::{hit_indicator, SequenceSpec};
use super::StatConfig;
use crate::error::{Error, Result};
use crate::pmspace::Point;
use crate::summability::{
    density_of_indicator, probe_schedule, DensityEstimate, DensityVerdict, IndexSet, SummabilityMatrix,
};
use crate::verdict::Verdict;

/// Index set assembled stage by stage over the radii `1/t`.
pub(crate) struct Stages {
    /// `u_1 < u_2 < … < u_T`.
    pub thresholds: Vec<usize>,
    /// Membership over the whole sequence.
    pub mask: Vec<bool>,
}

/// Picks `u_t` as the smallest index in `S_t = {k : gap_k < 1/t}` beyond
/// `u_{t-1}` and beyond every probed row `n ≤ N` where the mass
/// `Σ_{k ∈ S_t} a_nk` is at most `level(t, probes)`, then assembles
///
/// `head ∪ ⋃_t ([u_t, u_{t+1}] ∩ S_t) ∪ ([u_T, len] ∩ S_T)`
///
/// where `head` is `[1, u_1]` when `whole_head` is set and `[1, u_1] ∩ S_1`
/// otherwise. Stops at `cfg.t_max` or when no `u_t ≤ N` qualifies.
pub(crate) fn greedy_stages<L>(
    a: &SummabilityMatrix,
    gaps: &[f64],
    truncation: usize,
    cfg: &StatConfig,
    whole_head: bool,
    level: L,
) -> Result<Stages>
where
    L: Fn(usize, &[(usize, f64)]) -> f64,
{
    let probes = probe_schedule(truncation, cfg.density.ratio);
    let mut thresholds: Vec<usize> = Vec::new();
    for t in 1..=cfg.t_max {
        let radius = 1.0 / t as f64;
        let ind = hit_indicator(gaps, radius);
        let summer = a.summer(&ind);
        let masses: Vec<(usize, f64)> = probes.iter().map(|&n| Ok((n, summer.sum(n)?))).collect::<Result<_>>()?;
        let bar = level(t, &masses);
        let last_fail = masses.iter().rev().find(|m| m.1 <= bar).map_or(0, |m| m.0);
        let lower = last_fail.max(thresholds.last().copied().unwrap_or(0));
        match (lower + 1..=truncation).find(|&k| gaps[k - 1] < radius) {
            Some(u) => thresholds.push(u),
            None => break,
        }
    }
    let mut mask = vec![false; gaps.len()];
    let Some(&u1) = thresholds.first() else {
        return Ok(Stages { thresholds, mask });
    };
    for k in 1..=u1 {
        mask[k - 1] = whole_head || gaps[k - 1] < 1.0;
    }
    for (i, &u) in thresholds.iter().enumerate() {
        let radius = 1.0 / (i + 1) as f64;
        let end = thresholds.get(i + 1).copied().unwrap_or(gaps.len());
        for k in u..=end {
            mask[k - 1] |= gaps[k - 1] < radius;
        }
    }
    Ok(Stages { thresholds, mask })
}

/// `gaps` with entries outside `mask` zeroed, for tail checks of a
/// subsequence in original indexing.
pub(crate) fn restricted(gaps: &[f64], mask: &[bool]) -> Vec<f64> {
    gaps.iter().zip(mask).map(|(&g, &m)| if m { g } else { 0.0 }).collect()
}

/// The index set `G` of density one along which `x` strongly converges.
#[derive(Clone, Debug, Serialize)]
pub struct FullDensitySubsequence {
    #[serde(skip)]
    pub set: IndexSet,
    pub matrix: String,
    pub truncation: usize,
    /// `u_1 < u_2 < … < u_T`, with `T` the deepest stage reached.
    pub thresholds: Vec<usize>,
    pub density: DensityEstimate,
    pub complement_density: DensityEstimate,
    /// Strong convergence of `{x_k : k ∈ G}` read on the truncation.
    pub tail: TailCheck,
    /// Every `k ∈ G ∩ [u_t, u_{t+1}]` has `gap_k < 1/t`.
    pub stages_consistent: bool,
    pub verdict: Verdict,
}

impl FullDensitySubsequence {
    pub fn deepest_t(&self) -> usize {
        self.thresholds.len()
    }
}

/// Builds `G` with `δ_A(G) = 1` such that `x_k → l` strongly along `G`.
///
/// Thresholds use the level `(t - 1)/t` on the probe schedule. Fails with
/// [`Error::TruncationTooSmall`] when fewer than two stages fit below the
/// truncation.
pub fn extract_full_density_subsequence<P: Point>(
    x: &SequenceSpec<P>,
    l: &P,
    a: &SummabilityMatrix,
    cfg: &StatConfig,
) -> Result<FullDensitySubsequence> {
    cfg.check()?;
    let truncation = truncation_for(a, x.len())?;
    let gaps = x.gaps_to(l);
    let stages = greedy_stages(a, &gaps, truncation, cfg, true, |t, _| (t - 1) as f64 / t as f64)?;
    if stages.thresholds.len() < 2 {
        return Err(Error::TruncationTooSmall { deepest_t: stages.thresholds.len() });
    }

    let stages_consistent = stages.thresholds.windows(2).enumerate().all(|(i, w)| {
        let radius = 1.0 / (i + 1) as f64;
        (w[0]..=w[1]).all(|k| !stages.mask[k - 1] || gaps[k - 1] < radius)
    });
    let ind: Vec<f64> = stages.mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
    let density = density_of_indicator(a, &ind, truncation, &cfg.density)?;
    let comp: Vec<f64> = ind.iter().map(|v| 1.0 - v).collect();
    let complement_density = if comp.iter().all(|&v| v == 0.0) {
        DensityEstimate::exact_zero(truncation, &cfg.density)
    } else {
        density_of_indicator(a, &comp, truncation, &cfg.density)?
    };
    let tail = tail_check(&restricted(&gaps, &stages.mask), &cfg.t_grid, truncation, cfg.tail_fraction);
    let verdict = if complement_density.verdict == DensityVerdict::Positive || !tail.passed || !stages_consistent {
        Verdict::Fail
    } else if complement_density.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Indeterminate
    };
    Ok(FullDensitySubsequence {
        set: IndexSet::from_mask(format!("G({})", x.label()), stages.mask),
        matrix: a.name().to_string(),
        truncation,
        thresholds: stages.thresholds,
        density,
        complement_density,
        tail,
        stages_consistent,
        verdict,
    })
}

/// `g_k = x_k` for `k ∈ g_set` and `g_k = l` elsewhere.
pub fn splice_on_null_set<P: Point>(x: &SequenceSpec<P>, l: &P, g_set: &IndexSet) -> SequenceSpec<P> {
    x.splice(g_set, l, format!("{}|spliced", x.label()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmspace::PmSpace;
    use crate::statconv::{stat_converges_to, strong_tail_check};
    use crate::summability::density;
    use crate::trifn::TriangleFunction;

    fn reals() -> PmSpace<f64> {
        PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min())
    }

    #[test]
    fn constant_sequence_keeps_everything() {
        let x = SequenceSpec::new(reals(), "const", 5000, |_| 2.0);
        let g =
            extract_full_density_subsequence(&x, &2.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        assert_eq!(g.set.count_upto(5000), 5000);
        assert_eq!(g.thresholds, (1..=64).collect::<Vec<_>>());
        assert_eq!(g.verdict, Verdict::Pass);
    }

    #[test]
    fn squares_are_dropped_after_the_head() {
        let n = 100_000;
        let x = SequenceSpec::new(reals(), "sq", n, |k| if k.isqrt().pow(2) == k { 5.0 } else { 0.0 });
        let a = SummabilityMatrix::cesaro();
        let g = extract_full_density_subsequence(&x, &0.0, &a, &StatConfig::default()).unwrap();
        assert_eq!(g.verdict, Verdict::Pass, "{g:?}");
        assert_eq!(g.thresholds[0], 2);
        assert_eq!(g.deepest_t(), 64);
        assert!(g.density.value >= 0.99);
        let squares_kept = IndexSet::squares().members_upto(n).into_iter().filter(|&k| g.set.contains(k)).count();
        assert_eq!(squares_kept, 1);

        let spliced = splice_on_null_set(&x, &0.0, &g.set);
        assert!(strong_tail_check(&spliced, &0.0, &StatConfig::default()).passed);
        let diff = x.differing_set(&spliced).unwrap();
        assert!(density(&a, &diff, n, &Default::default()).unwrap().is_zero());
        assert!(stat_converges_to(&spliced, &0.0, &a, &StatConfig::default()).unwrap().verdict.is_pass());
    }

    #[test]
    fn drifting_sequence_reaches_stages_by_growth() {
        let x = SequenceSpec::new(reals(), "drift", 100_000, |k| 1.0 / (k as f64).sqrt());
        let g =
            extract_full_density_subsequence(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()).unwrap();
        assert!(g.stages_consistent);
        assert!(g.deepest_t() >= 40 && g.deepest_t() < 64, "{}", g.deepest_t());
        assert_eq!(g.verdict, Verdict::Pass);
    }

    #[test]
    fn unreachable_limit_reports_the_deepest_stage() {
        let x = SequenceSpec::new(reals(), "far", 1000, |_| 3.0);
        match extract_full_density_subsequence(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default()) {
            Err(Error::TruncationTooSmall { deepest_t }) => assert_eq!(deepest_t, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn splicing_onto_the_complement_of_squares_gives_the_limit() {
        let x = SequenceSpec::new(reals(), "sq", 400, |k| if k.isqrt().pow(2) == k { 5.0 } else { 0.0 });
        let g = splice_on_null_set(&x, &0.0, &IndexSet::squares().complement());
        assert!(g.points().iter().all(|&p| p == 0.0));
        assert_eq!(splice_on_null_set(&x, &0.0, &IndexSet::All).points(), x.points());
    }
}
