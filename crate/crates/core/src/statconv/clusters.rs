use rayon::prelude::*;
use serde::Serialize;

use super::construction::{greedy_stages, restricted};
use super::convergence::{tail_check, truncation_for, TailCheck};
use super::sequence::{hit_indicator, SequenceSpec};
use super::StatConfig;
use crate::error::{domain, Result};
use crate::pmspace::{PmSpace, Point};
use crate::summability::{density_of_indicator, DensityEstimate, SummabilityMatrix};
use crate::verdict::Verdict;

/// Greedy search for a nonthin subsequence converging to one candidate.
#[derive(Clone, Debug, Serialize)]
pub struct LimitSearch {
    pub thresholds: Vec<usize>,
    pub density: DensityEstimate,
    pub tail: TailCheck,
    pub accepted: bool,
}

/// Everything measured for one candidate point.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateScan<P> {
    pub candidate: P,
    /// `(t, δ_A({k : x_k ∈ N_ν(t)}))`.
    pub hits: Vec<(f64, DensityEstimate)>,
    /// Every neighbourhood is hit in the second half of the truncation.
    pub late_hits: bool,
    pub cluster: bool,
    /// Present only for cluster candidates examined by [`limit_points`].
    pub limit_search: Option<LimitSearch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport<P> {
    pub matrix: String,
    pub truncation: usize,
    pub thresholds: Vec<f64>,
    pub scans: Vec<CandidateScan<P>>,
    /// Limit points; empty unless produced by [`limit_points`], and found by
    /// a heuristic search.
    pub lambda: Vec<P>,
    pub gamma: Vec<P>,
    /// Ordinary limit points, read as candidates with late hits.
    pub ordinary: Vec<P>,
    pub lambda_searched: bool,
}

impl<P: Point> ClusterReport<P> {
    pub fn candidates(&self) -> impl Iterator<Item = &P> {
        self.scans.iter().map(|s| &s.candidate)
    }

    /// `Λ ⊆ Γ ⊆ L` on the scanned grid.
    pub fn containments_hold(&self) -> bool {
        self.lambda.iter().all(|p| self.gamma.contains(p)) && self.gamma.iter().all(|p| self.ordinary.contains(p))
    }
}

fn scan<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    candidate: &P,
    truncation: usize,
    cfg: &StatConfig,
) -> Result<(CandidateScan<P>, Vec<f64>)> {
    let gaps = x.gaps_to(candidate);
    let half = truncation / 2;
    let mut late_hits = true;
    let mut hits = Vec::with_capacity(cfg.t_grid.len());
    for &t in &cfg.t_grid {
        let ind = hit_indicator(&gaps, t);
        late_hits &= ind[half..].iter().any(|&v| v > 0.0);
        let est = if ind.iter().all(|&v| v == 0.0) {
            DensityEstimate::exact_zero(truncation, &cfg.density)
        } else {
            density_of_indicator(a, &ind, truncation, &cfg.density)?
        };
        hits.push((t, est));
    }
    let cluster = hits.iter().all(|h| h.1.is_positive());
    Ok((CandidateScan { candidate: candidate.clone(), hits, late_hits, cluster, limit_search: None }, gaps))
}

fn assemble<P: Point>(
    a: &SummabilityMatrix,
    truncation: usize,
    cfg: &StatConfig,
    scans: Vec<CandidateScan<P>>,
    lambda_searched: bool,
) -> ClusterReport<P> {
    let pick = |f: fn(&CandidateScan<P>) -> bool| scans.iter().filter(|s| f(s)).map(|s| s.candidate.clone()).collect();
    ClusterReport {
        matrix: a.name().to_string(),
        truncation,
        thresholds: cfg.t_grid.clone(),
        lambda: pick(|s| s.limit_search.as_ref().is_some_and(|l| l.accepted)),
        gamma: pick(|s| s.cluster),
        ordinary: pick(|s| s.late_hits),
        scans,
        lambda_searched,
    }
}

/// Scans candidates for strong A-statistical cluster points: every hit set
/// `{k : x_k ∈ N_ν(t)}` must read as positive density, that is, a trailing
/// minimum at or above `nonthin_floor`.
pub fn cluster_points<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    candidates: &[P],
    cfg: &StatConfig,
) -> Result<ClusterReport<P>> {
    cfg.check()?;
    if candidates.is_empty() {
        return domain("candidate grid is empty");
    }
    let truncation = truncation_for(a, x.len())?;
    let scans =
        candidates.par_iter().map(|c| scan(x, a, c, truncation, cfg).map(|s| s.0)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(a, truncation, cfg, scans, false))
}

/// Scans for cluster points, then searches each one for a nonthin index set
/// `M` along which `x` strongly converges to it.
///
/// `M` is assembled greedily over the radii `1/t` like the full-density
/// construction, with the level `(1 - 1/t)` times the trailing minimum of the
/// hit mass. A candidate is accepted when `δ_A(M)` reads as positive and the
/// subsequence passes the tail check. This is a heuristic: failure to find
/// `M` does not show that none exists.
pub fn limit_points<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    candidates: &[P],
    cfg: &StatConfig,
) -> Result<ClusterReport<P>> {
    cfg.check()?;
    if candidates.is_empty() {
        return domain("candidate grid is empty");
    }
    let truncation = truncation_for(a, x.len())?;
    let window = cfg.density.window;
    let scans = candidates
        .par_iter()
        .map(|c| {
            let (mut s, gaps) = scan(x, a, c, truncation, cfg)?;
            if s.cluster {
                let stages = greedy_stages(a, &gaps, truncation, cfg, false, |t, masses| {
                    let tail = &masses[masses.len().saturating_sub(window)..];
                    let floor = tail.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
                    (1.0 - 1.0 / t as f64) * floor
                })?;
                let ind: Vec<f64> = stages.mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
                let density = if stages.thresholds.is_empty() {
                    DensityEstimate::exact_zero(truncation, &cfg.density)
                } else {
                    density_of_indicator(a, &ind, truncation, &cfg.density)?
                };
                let tail = tail_check(&restricted(&gaps, &stages.mask), &cfg.t_grid, truncation, cfg.tail_fraction);
                let accepted = density.is_positive() && tail.passed;
                s.limit_search = Some(LimitSearch { thresholds: stages.thresholds, density, tail, accepted });
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(a, truncation, cfg, scans, true))
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundedReport {
    pub escapes: usize,
    /// Density of `{k : x_k ∉ C}`.
    pub escape_density: DensityEstimate,
    pub verdict: Verdict,
}

/// Whether `δ_A({k : x_k ∉ C}) = 0`. Membership is equality, or
/// `gap(x_k, c) < r` for some `c ∈ C` when a radius `r` is given.
pub fn is_stat_bounded<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    set: &[P],
    radius: Option<f64>,
    cfg: &StatConfig,
) -> Result<BoundedReport> {
    if set.is_empty() {
        return domain("bounding set is empty");
    }
    if radius.is_some_and(|r| !(r > 0.0)) {
        return domain(format!("membership radius {radius:?} must be positive"));
    }
    let truncation = truncation_for(a, x.len())?;
    let space = x.space();
    let escape: Vec<f64> = x.map_terms(|p| {
        let inside = match radius {
            None => set.contains(p),
            Some(r) => set.iter().any(|c| space.gap(p, c) < r),
        };
        if inside {
            0.0
        } else {
            1.0
        }
    });
    let escapes = escape.iter().filter(|&&v| v > 0.0).count();
    let escape_density = if escapes == 0 {
        DensityEstimate::exact_zero(truncation, &cfg.density)
    } else {
        density_of_indicator(a, &escape, truncation, &cfg.density)?
    };
    Ok(BoundedReport { escapes, verdict: escape_density.zero_verdict(), escape_density })
}

/// `δ_A({k : x_k ∈ C})` for a finite `C` disjoint from the cluster-point
/// estimate `gamma`.
pub fn compact_disjoint_check<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    set: &[P],
    gamma: &[P],
    cfg: &StatConfig,
) -> Result<DensityEstimate> {
    if let Some(p) = set.iter().find(|p| gamma.contains(p)) {
        return domain(format!("set meets the cluster points at {p:?}"));
    }
    let truncation = truncation_for(a, x.len())?;
    let inside: Vec<f64> = x.map_terms(|p| if set.contains(p) { 1.0 } else { 0.0 });
    if inside.iter().all(|&v| v == 0.0) {
        return Ok(DensityEstimate::exact_zero(truncation, &cfg.density));
    }
    density_of_indicator(a, &inside, truncation, &cfg.density)
}

/// Grid-level closedness of `gamma`: candidates outside `gamma` lying within
/// `radius` of a member. An empty result means closed on this grid.
pub fn gamma_closure_check<P: Point>(space: &PmSpace<P>, candidates: &[P], gamma: &[P], radius: f64) -> Vec<P> {
    candidates
        .iter()
        .filter(|c| !gamma.contains(c) && gamma.iter().any(|g| space.gap(c, g) < radius))
        .cloned()
        .collect()
}
