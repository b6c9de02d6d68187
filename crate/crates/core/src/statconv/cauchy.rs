use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::convergence::{pair_distances, truncation_for};
use super::sequence::{exception_indicator, SequenceSpec};
use super::StatConfig;
use crate::error::{domain, Result};
use crate::pmspace::Point;
use crate::summability::{density_of_indicator, DensityEstimate, DensityVerdict, IndexSet, SummabilityMatrix};
use crate::verdict::Verdict;

/// Anchor indices always tried, before the geometric ones.
const LEADING_ANCHORS: usize = 16;

/// Pairs sampled from `Q_t` when the sequence has too many distinct values
/// to check every pair.
const SAMPLED_PAIRS: usize = 2000;

/// Outcome at one `γ`.
#[derive(Clone, Debug, Serialize)]
pub struct CauchyGamma {
    pub gamma: f64,
    /// First anchor `k_0` whose far set `{k : dist(k, k_0) ≥ γ}` reads as null.
    pub anchor: Option<usize>,
    pub anchors_tried: usize,
    /// Far-set estimate for the accepted anchor, or for the last one tried.
    pub far_set: DensityEstimate,
    pub verdict: Verdict,
    /// Estimated density of `{j : δ_A({k : dist(k, j) ≥ γ}) ≠ 0}`.
    pub nested: f64,
    pub nested_verdict: DensityVerdict,
    /// The nested statistic covered every `j` rather than a subsample.
    pub nested_exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    pub matrix: String,
    pub truncation: usize,
    /// The distance between terms that the far sets threshold.
    pub distance: &'static str,
    pub per_gamma: Vec<CauchyGamma>,
    pub verdict: Verdict,
}

/// Terms grouped by value: `codes[k - 1]` and the first index of each code.
struct TermCodes {
    codes: Vec<u32>,
    first: Vec<usize>,
}

impl TermCodes {
    fn from_codes<I: IntoIterator<Item = u32>>(raw: I) -> Self {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let mut first = Vec::new();
        let codes = raw
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                *remap.entry(c).or_insert_with(|| {
                    first.push(i + 1);
                    (first.len() - 1) as u32
                })
            })
            .collect();
        TermCodes { codes, first }
    }
}

fn anchor_probes(truncation: usize, codes: Option<&TermCodes>) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=LEADING_ANCHORS.min(truncation)).collect();
    match codes {
        Some(c) => out.extend(c.first.iter().copied().filter(|&k| k <= truncation)),
        None => {
            let mut x = LEADING_ANCHORS as f64;
            while x < truncation as f64 {
                x *= 1.5;
                out.push((x.ceil() as usize).min(truncation));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn far_set_estimate(
    a: &SummabilityMatrix,
    dist: &[f64],
    gamma: f64,
    truncation: usize,
    cfg: &StatConfig,
) -> Result<DensityEstimate> {
    let ind = exception_indicator(dist, gamma);
    if ind.iter().all(|&v| v == 0.0) {
        return Ok(DensityEstimate::exact_zero(truncation, &cfg.density));
    }
    density_of_indicator(a, &ind, truncation, &cfg.density)
}

fn cauchy_core<D>(
    a: &SummabilityMatrix,
    len: usize,
    codes: Option<&TermCodes>,
    distance: &'static str,
    dist_to_anchor: D,
    cfg: &StatConfig,
) -> Result<CauchyReport>
where
    D: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    cfg.check()?;
    let truncation = truncation_for(a, len)?;
    let probes = anchor_probes(truncation, codes);

    let mut found: Vec<Option<(usize, DensityEstimate)>> = vec![None; cfg.t_grid.len()];
    let mut last: Vec<Option<DensityEstimate>> = vec![None; cfg.t_grid.len()];
    let mut any_open: Vec<bool> = vec![false; cfg.t_grid.len()];
    let mut tried = vec![0usize; cfg.t_grid.len()];
    for &k0 in &probes {
        if found.iter().all(Option::is_some) {
            break;
        }
        let dist = dist_to_anchor(k0)?;
        for (i, &gamma) in cfg.t_grid.iter().enumerate() {
            if found[i].is_some() {
                continue;
            }
            tried[i] += 1;
            let est = far_set_estimate(a, &dist, gamma, truncation, cfg)?;
            match est.verdict {
                DensityVerdict::Zero => found[i] = Some((k0, est)),
                DensityVerdict::Indeterminate => {
                    any_open[i] = true;
                    last[i] = Some(est);
                }
                DensityVerdict::Positive => last[i] = Some(est),
            }
        }
    }

    let nested = nested_statistics(a, len, truncation, codes, &dist_to_anchor, cfg)?;
    let per_gamma: Vec<CauchyGamma> = cfg
        .t_grid
        .iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let (anchor, far_set, verdict) = match found[i].take() {
                Some((k0, est)) => (Some(k0), est, Verdict::Pass),
                None => {
                    let v = if any_open[i] { Verdict::Indeterminate } else { Verdict::Fail };
                    (None, last[i].take().expect("at least one anchor probed"), v)
                }
            };
            let (value, nested_verdict, nested_exact) = nested[i];
            CauchyGamma {
                gamma,
                anchor,
                anchors_tried: tried[i],
                far_set,
                verdict,
                nested: value,
                nested_verdict,
                nested_exact,
            }
        })
        .collect();
    Ok(CauchyReport {
        matrix: a.name().to_string(),
        truncation,
        distance,
        verdict: Verdict::all(per_gamma.iter().map(|g| g.verdict)),
        per_gamma,
    })
}

/// The set `B_γ = {j : δ_A(D_j(γ)) ≠ 0}` and its density, per `γ`.
///
/// With value codes every `j` is covered, since `D_j` depends only on the
/// value `x_j`. Otherwise `j` runs over an evenly spaced grid of
/// `cfg.nested_grid` anchors, each standing for the stretch of columns up to
/// it, and the density is read as the row-`N` mass of the flagged stretches.
fn nested_statistics<D>(
    a: &SummabilityMatrix,
    len: usize,
    truncation: usize,
    codes: Option<&TermCodes>,
    dist_to_anchor: &D,
    cfg: &StatConfig,
) -> Result<Vec<(f64, DensityVerdict, bool)>>
where
    D: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    let flagged = |anchors: &[usize]| -> Result<Vec<Vec<bool>>> {
        anchors
            .par_iter()
            .map(|&j| {
                let dist = dist_to_anchor(j)?;
                cfg.t_grid
                    .iter()
                    .map(|&g| Ok(far_set_estimate(a, &dist, g, truncation, cfg)?.verdict != DensityVerdict::Zero))
                    .collect()
            })
            .collect()
    };
    match codes {
        Some(c) => {
            let bad = flagged(&c.first)?;
            (0..cfg.t_grid.len())
                .map(|i| {
                    let ind: Vec<f64> =
                        c.codes[..len].iter().map(|&code| if bad[code as usize][i] { 1.0 } else { 0.0 }).collect();
                    let est = if ind.iter().all(|&v| v == 0.0) {
                        DensityEstimate::exact_zero(truncation, &cfg.density)
                    } else {
                        density_of_indicator(a, &ind, truncation, &cfg.density)?
                    };
                    Ok((est.value, est.verdict, true))
                })
                .collect()
        }
        None => {
            let m = cfg.nested_grid.clamp(1, truncation);
            let anchors: Vec<usize> = (1..=m).map(|i| (i * truncation).div_ceil(m)).collect();
            let bad = flagged(&anchors)?;
            let row = a.entries(truncation);
            let mut weights = vec![0.0; m];
            for (k, w) in row {
                let stretch = anchors.partition_point(|&j| j < k).min(m - 1);
                weights[stretch] += w;
            }
            Ok((0..cfg.t_grid.len())
                .map(|i| {
                    let v: f64 = weights.iter().zip(&bad).filter(|(_, b)| b[i]).fold(0.0, |acc, (w, _)| acc + w);
                    let verdict = if v <= cfg.density.zero_tol {
                        DensityVerdict::Zero
                    } else if v >= cfg.density.nonthin_floor {
                        DensityVerdict::Positive
                    } else {
                        DensityVerdict::Indeterminate
                    };
                    (v, verdict, false)
                })
                .collect())
        }
    }
}

fn point_codes<P: Point>(x: &SequenceSpec<P>) -> Option<TermCodes> {
    x.value_codes().map(|c| TermCodes::from_codes(c.codes.iter().map(|&v| v as u32)))
}

/// Whether `x` is strongly A-statistically Cauchy: for each `γ` in
/// `cfg.t_grid`, some anchor `k_0` leaves `{k : gap(x_k, x_{k_0}) ≥ γ}` null.
pub fn is_stat_cauchy<P: Point>(x: &SequenceSpec<P>, a: &SummabilityMatrix, cfg: &StatConfig) -> Result<CauchyReport> {
    let codes = point_codes(x);
    cauchy_core(a, x.len(), codes.as_ref(), "gap between terms", |k0| Ok(x.gaps_to(x.point(k0))), cfg)
}

/// Cauchyness of the distance functions `F_{x_k y_k}` in `(D⁺, d_L)`.
pub fn levy_cauchy<P: Point>(
    x: &SequenceSpec<P>,
    y: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    cfg: &StatConfig,
) -> Result<CauchyReport> {
    if x.len() != y.len() {
        return domain(format!("paired sequences differ in length ({} vs {})", x.len(), y.len()));
    }
    let codes = match (x.value_codes(), y.value_codes()) {
        (Some(cx), Some(cy)) => {
            Some(TermCodes::from_codes(cx.codes.iter().zip(&cy.codes).map(|(&i, &j)| ((i as u32) << 16) | j as u32)))
        }
        _ => None,
    };
    let space = x.space();
    cauchy_core(
        a,
        x.len(),
        codes.as_ref(),
        "Lévy distance between distance functions",
        |k0| pair_distances(x, y, &space.distance(x.point(k0), y.point(k0))),
        cfg,
    )
}

/// The set `P_t` outside of which all pairs of terms are `t`-close.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalSet {
    pub t: f64,
    /// Vicinity parameter: `gap < γ` twice composes to `gap < t` on the
    /// sampled values.
    pub gamma: f64,
    pub anchor: usize,
    #[serde(skip)]
    pub set: IndexSet,
    pub density: DensityEstimate,
    pub pairs_checked: usize,
    pub pair_violations: usize,
    pub pairs_exhaustive: bool,
    pub witness: Option<(usize, usize)>,
}

/// Builds `P_t = {m : F_{x_m x_{k_0}}(γ) ≤ 1 - γ}` and checks that pairs
/// `m, j ∉ P_t` satisfy `F_{x_m x_j}(t) > 1 - t`.
///
/// `γ` comes from the vicinity search over the sequence's distinct values,
/// or over an evenly spaced sample of terms when there are too many.
pub fn cauchy_exceptional_set<P: Point>(
    x: &SequenceSpec<P>,
    a: &SummabilityMatrix,
    t: f64,
    cfg: &StatConfig,
) -> Result<ExceptionalSet> {
    cfg.check()?;
    let truncation = truncation_for(a, x.len())?;
    let space = x.space();
    let sample: Vec<P> = match x.distinct_values() {
        Some(v) => v.to_vec(),
        None => {
            let m = 256.min(truncation);
            (1..=m).map(|i| x.point((i * truncation).div_ceil(m)).clone()).collect()
        }
    };
    let gamma = space.find_vicinity_alpha(t, &sample)?;

    let codes = point_codes(x);
    let probes = anchor_probes(truncation, codes.as_ref());
    let mut accepted = None;
    for &k0 in &probes {
        let gaps = x.gaps_to(x.point(k0));
        let est = far_set_estimate(a, &gaps, gamma, truncation, cfg)?;
        if est.is_zero() {
            accepted = Some((k0, gaps, est));
            break;
        }
    }
    let Some((anchor, gaps, density)) = accepted else {
        return domain(format!("no anchor among {} probes leaves a null far set at γ = {gamma}", probes.len()));
    };
    let bits: Vec<bool> = gaps.iter().map(|&g| g >= gamma).collect();
    let q: Vec<usize> = (1..=truncation).filter(|&k| !bits[k - 1]).collect();
    let set = IndexSet::from_mask(format!("P_t(t = {t})"), bits);

    let close = |m: usize, j: usize| space.in_strong_neighborhood(x.point(m), t, x.point(j));
    let mut pairs_checked = 0;
    let mut pair_violations = 0;
    let mut witness = None;
    let mut record = |m: usize, j: usize, ok: bool| {
        pairs_checked += 1;
        if !ok {
            pair_violations += 1;
            witness.get_or_insert((m, j));
        }
    };
    let pairs_exhaustive = match &codes {
        Some(c) => {
            let mut reps: Vec<usize> = Vec::new();
            let mut seen = vec![false; c.first.len()];
            for &k in &q {
                let code = c.codes[k - 1] as usize;
                if !seen[code] {
                    seen[code] = true;
                    reps.push(k);
                }
            }
            for &m in &reps {
                for &j in &reps {
                    record(m, j, close(m, j)?);
                }
            }
            true
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_PAIRS.min(q.len() * q.len()) {
                let m = q[rng.random_range(0..q.len())];
                let j = q[rng.random_range(0..q.len())];
                record(m, j, close(m, j)?);
            }
            false
        }
    };
    Ok(ExceptionalSet { t, gamma, anchor, set, density, pairs_checked, pair_violations, pairs_exhaustive, witness })
}
