//! Strong A-summability and strong statistical A-summability.
//!
//! The transform `y_j = Σ_k a_jk · d_L(F_{x_k L}, ε_0)` turns a sequence of
//! points into a nonnegative real sequence. Strong A-summability asks
//! `y_j → 0`; the statistical version asks only that `{j : y_j ≥ t}` have
//! natural density zero for each `t`. The outer density is Cesàro whatever
//! `A` is; [`OuterDensity::Matrix`] swaps in `δ_A` as an extension.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::pmspace::Point;
use crate::statconv::{stat_converges_to, strong_tail_check, SequenceSpec, StatConfig};
use crate::summability::{density_of_indicator, probe_schedule, DensityConfig, DensityEstimate, SummabilityMatrix};
use crate::verdict::Verdict;

/// Default tolerance on the trailing transform values.
pub const DEFAULT_STRONG_TOL: f64 = 2e-2;

/// Default thresholds for the sets `{j : y_j ≥ t}`, coarser than
/// [`DEFAULT_T_GRID`](crate::statconv::DEFAULT_T_GRID).
pub const DEFAULT_OUTER_T_GRID: [f64; 3] = [0.5, 0.2, 0.1];

/// The rows `y_1, …, y_J` of the strong transform.
#[derive(Clone, Debug, Serialize)]
pub struct TransformTrace {
    pub label: String,
    pub matrix: String,
    /// `y[j - 1] = y_j`.
    pub y: Vec<f64>,
    /// Columns read by the deepest row.
    pub columns_used: usize,
}

impl TransformTrace {
    /// A trace given directly by its values.
    pub fn from_values(label: impl Into<String>, y: Vec<f64>) -> Self {
        let columns_used = y.len();
        TransformTrace { label: label.into(), matrix: "given".into(), y, columns_used }
    }

    /// `J`.
    pub fn truncation(&self) -> usize {
        self.y.len()
    }

    /// `(j, y_j)` rows for export.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.y.iter().enumerate().map(|(i, &v)| (i + 1, v))
    }
}

/// Computes `y_j` for `j = 1..=j_max`. Rows reaching past the sequence are
/// an error naming the row.
pub fn a_transform<P: Point>(
    x: &SequenceSpec<P>,
    l: &P,
    a: &SummabilityMatrix,
    j_max: usize,
) -> Result<TransformTrace> {
    if j_max == 0 {
        return domain("transform needs at least one row");
    }
    let gaps = x.gaps_to(l);
    let summer = a.summer(&gaps);
    let y = (1..=j_max).into_par_iter().map(|j| summer.sum(j)).collect::<Result<Vec<f64>>>()?;
    let columns_used = (1..=j_max).map(|j| a.support_end(j)).max().unwrap_or(0);
    Ok(TransformTrace { label: x.label().to_string(), matrix: a.name().to_string(), y, columns_used })
}

/// Reading of `y_j → 0` on a truncation.
#[derive(Clone, Debug, Serialize)]
pub struct StrongSummability {
    pub tol: f64,
    /// First row of the examined trailing region.
    pub region_start: usize,
    pub worst: f64,
    pub worst_at: usize,
    pub verdict: Verdict,
}

/// Passes when every `y_j` from the start of the trailing probe window to
/// `J` is at most `tol`. Fails when a larger value sits in the last probe
/// stretch; an excess only earlier in the window is indeterminate.
pub fn is_strongly_a_summable(trace: &TransformTrace, tol: f64, cfg: &DensityConfig) -> Result<StrongSummability> {
    let j_max = trace.truncation();
    if j_max < 10 {
        return domain(format!("trace of length {j_max} is below the minimum of 10"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let probes = probe_schedule(j_max, cfg.ratio);
    let region_start = probes[probes.len() - cfg.window.min(probes.len())];
    let last_stretch = probes[probes.len().saturating_sub(2)];
    let (mut worst, mut worst_at) = (f64::NEG_INFINITY, region_start);
    let mut late_excess = false;
    for j in region_start..=j_max {
        let v = trace.y[j - 1];
        if v > worst {
            worst = v;
            worst_at = j;
        }
        late_excess |= j > last_stretch && v > tol;
    }
    let verdict = if worst <= tol {
        Verdict::Pass
    } else if late_excess {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    };
    Ok(StrongSummability { tol, region_start, worst, worst_at, verdict })
}

/// Density used for the outer sets `{j : y_j ≥ t}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OuterDensity {
    /// Natural density.
    #[default]
    Natural,
    /// `δ_A` of the transform's own matrix.
    Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatSummability {
    pub outer: OuterDensity,
    /// `(t, density of {j : y_j ≥ t})`.
    pub per_t: Vec<(f64, DensityEstimate)>,
    pub verdict: Verdict,
}

/// Whether `{j : y_j ≥ t}` has density zero for every `t` in `t_grid`.
/// `matrix` is needed only for [`OuterDensity::Matrix`].
pub fn is_stat_a_summable(
    trace: &TransformTrace,
    t_grid: &[f64],
    outer: OuterDensity,
    matrix: Option<&SummabilityMatrix>,
    cfg: &DensityConfig,
) -> Result<StatSummability> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0)) {
        return domain(format!("t grid {t_grid:?} must be nonempty and positive"));
    }
    let natural = SummabilityMatrix::cesaro();
    let a = match (outer, matrix) {
        (OuterDensity::Natural, _) => &natural,
        (OuterDensity::Matrix, Some(m)) => m,
        (OuterDensity::Matrix, None) => return domain("matrix outer density requested without a matrix"),
    };
    let truncation = a.row_limit(trace.truncation());
    let per_t = t_grid
        .iter()
        .map(|&t| {
            let ind: Vec<f64> = trace.y.iter().map(|&v| if v >= t { 1.0 } else { 0.0 }).collect();
            let est = if ind.iter().all(|&v| v == 0.0) {
                DensityEstimate::exact_zero(truncation, cfg)
            } else {
                density_of_indicator(a, &ind, truncation, cfg)?
            };
            Ok((t, est))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::all(per_t.iter().map(|p| p.1.zero_verdict()));
    Ok(StatSummability { outer, per_t, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ImplicationStatus {
    /// Premise and conclusion both pass.
    Holds,
    /// Premise passes, conclusion fails: a counterexample on this truncation.
    Violated,
    /// Premise fails.
    Vacuous,
    /// Premise or conclusion undecided.
    Inconclusive,
}

impl ImplicationStatus {
    pub fn evaluate(premise: Verdict, conclusion: Verdict) -> Self {
        match (premise, conclusion) {
            (Verdict::Fail, _) => ImplicationStatus::Vacuous,
            (Verdict::Pass, Verdict::Pass) => ImplicationStatus::Holds,
            (Verdict::Pass, Verdict::Fail) => ImplicationStatus::Violated,
            _ => ImplicationStatus::Inconclusive,
        }
    }
}

impl fmt::Display for ImplicationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImplicationStatus::Holds => "holds",
            ImplicationStatus::Violated => "VIOLATED",
            ImplicationStatus::Vacuous => "vacuous",
            ImplicationStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Implication {
    pub premise: &'static str,
    pub conclusion: &'static str,
    pub status: ImplicationStatus,
}

/// The four notions on one instance and the implications between them.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub matrix: String,
    pub truncation: usize,
    pub rows: usize,
    pub strong_tol: f64,
    pub strongly_convergent: Verdict,
    pub stat_convergent: Verdict,
    pub strongly_summable: Verdict,
    pub stat_summable: Verdict,
    pub implications: Vec<Implication>,
    #[serde(skip)]
    pub trace: TransformTrace,
}

impl SuiteReport {
    pub fn no_violations(&self) -> bool {
        self.implications.iter().all(|i| i.status != ImplicationStatus::Violated)
    }

    /// `(name, verdict)` for the four notions.
    pub fn verdicts(&self) -> [(&'static str, Verdict); 4] {
        [
            (STRONG_CONV, self.strongly_convergent),
            (STAT_CONV, self.stat_convergent),
            (STRONG_SUM, self.strongly_summable),
            (STAT_SUM, self.stat_summable),
        ]
    }
}

const STRONG_CONV: &str = "strongly convergent";
const STAT_CONV: &str = "A-statistically convergent";
const STRONG_SUM: &str = "strongly A-summable";
const STAT_SUM: &str = "strongly statistically A-summable";

/// Evaluates strong convergence, A-statistical convergence, strong
/// A-summability over `rows` transform rows and statistical A-summability
/// at the thresholds `outer_t_grid`, then checks the implications among
/// them.
pub fn implication_suite<P: Point>(
    x: &SequenceSpec<P>,
    l: &P,
    a: &SummabilityMatrix,
    rows: usize,
    strong_tol: f64,
    outer_t_grid: &[f64],
    cfg: &StatConfig,
) -> Result<SuiteReport> {
    let conv = stat_converges_to(x, l, a, cfg)?;
    let strongly_convergent = Verdict::from_bool(strong_tail_check(x, l, cfg).passed);
    let trace = a_transform(x, l, a, rows)?;
    let strong = is_strongly_a_summable(&trace, strong_tol, &cfg.density)?;
    let stat = is_stat_a_summable(&trace, outer_t_grid, OuterDensity::Natural, None, &cfg.density)?;
    let imp =
        |premise, p, conclusion, c| Implication { premise, conclusion, status: ImplicationStatus::evaluate(p, c) };
    let implications = vec![
        imp(STRONG_CONV, strongly_convergent, STAT_CONV, conv.verdict),
        imp(STAT_CONV, conv.verdict, STRONG_SUM, strong.verdict),
        imp(STRONG_SUM, strong.verdict, STAT_CONV, conv.verdict),
        imp(STRONG_SUM, strong.verdict, STAT_SUM, stat.verdict),
    ];
    Ok(SuiteReport {
        matrix: a.name().to_string(),
        truncation: conv.truncation,
        rows,
        strong_tol,
        strongly_convergent,
        stat_convergent: conv.verdict,
        strongly_summable: strong.verdict,
        stat_summable: stat.verdict,
        implications,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
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

    fn cfg() -> DensityConfig {
        DensityConfig::default()
    }

    #[test]
    fn square_trace_matches_the_count() {
        let x = squares_perturbed(100_000);
        let tr = a_transform(&x, &0.0, &SummabilityMatrix::cesaro(), 100_000).unwrap();
        for j in [1, 2, 17, 1000, 99_999] {
            assert_eq!(tr.y[j - 1], j.isqrt() as f64 / j as f64);
        }
        let s = is_strongly_a_summable(&tr, DEFAULT_STRONG_TOL, &cfg()).unwrap();
        assert_eq!(s.verdict, Verdict::Pass);
        assert!(s.worst < 0.011 && s.worst > 0.010, "{}", s.worst);
    }

    #[test]
    fn constant_trace_is_zero() {
        let x = SequenceSpec::new(reals(), "c", 100, |_| 1.0);
        let tr = a_transform(&x, &1.0, &SummabilityMatrix::cesaro(), 100).unwrap();
        assert!(tr.y.iter().all(|&v| v == 0.0));
        assert_eq!(is_strongly_a_summable(&tr, 1e-9, &cfg()).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn alternating_trace_tends_to_half_the_gap() {
        let x = SequenceSpec::new(reals(), "alt", 10_000, |k| if k % 2 == 0 { 0.0 } else { 3.0 });
        let tr = a_transform(&x, &0.0, &SummabilityMatrix::cesaro(), 10_000).unwrap();
        assert!((tr.y[9_999] - 0.5).abs() < 1e-12);
        assert_eq!(is_strongly_a_summable(&tr, DEFAULT_STRONG_TOL, &cfg()).unwrap().verdict, Verdict::Fail);
        let st = is_stat_a_summable(&tr, &[0.5, 0.2], OuterDensity::Natural, None, &cfg()).unwrap();
        assert_eq!(st.verdict, Verdict::Fail);
    }

    #[test]
    fn short_sequence_names_the_row() {
        let x = SequenceSpec::new(reals(), "c", 50, |_| 1.0);
        match a_transform(&x, &1.0, &SummabilityMatrix::lacunary(2.0).unwrap(), 50) {
            Err(Error::SequenceTooShort { row, .. }) => assert_eq!(row, 33),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn square_spikes_separate_the_notions() {
        let y: Vec<f64> = (1..=100_000usize).map(|j| if j.isqrt().pow(2) == j { 1.0 } else { 0.0 }).collect();
        let tr = TransformTrace::from_values("spikes", y);
        assert_eq!(is_strongly_a_summable(&tr, DEFAULT_STRONG_TOL, &cfg()).unwrap().verdict, Verdict::Fail);
        let st = is_stat_a_summable(&tr, &[0.5, 0.1], OuterDensity::Natural, None, &cfg()).unwrap();
        assert_eq!(st.verdict, Verdict::Pass);
        let a = SummabilityMatrix::cesaro();
        let via_a = is_stat_a_summable(&tr, &[0.5], OuterDensity::Matrix, Some(&a), &cfg()).unwrap();
        assert_eq!(via_a.verdict, Verdict::Pass);
        assert!(is_stat_a_summable(&tr, &[0.5], OuterDensity::Matrix, None, &cfg()).is_err());
    }

    #[test]
    fn suite_on_three_instances() {
        let a = SummabilityMatrix::cesaro();
        let sc = StatConfig::default();
        let sq = implication_suite(
            &squares_perturbed(100_000),
            &0.0,
            &a,
            100_000,
            DEFAULT_STRONG_TOL,
            &DEFAULT_OUTER_T_GRID,
            &sc,
        )
        .unwrap();
        assert!(sq.no_violations());
        assert_eq!(sq.strongly_convergent, Verdict::Fail);
        assert!(sq.stat_convergent.is_pass() && sq.strongly_summable.is_pass() && sq.stat_summable.is_pass());

        let c = SequenceSpec::new(reals(), "c", 10_000, |_| 0.0);
        let cs = implication_suite(&c, &0.0, &a, 10_000, DEFAULT_STRONG_TOL, &DEFAULT_OUTER_T_GRID, &sc).unwrap();
        assert!(cs.verdicts().iter().all(|v| v.1.is_pass()));
        assert!(cs.implications.iter().all(|i| i.status == ImplicationStatus::Holds));

        let alt = SequenceSpec::new(reals(), "alt", 10_000, |k| if k % 2 == 0 { 0.0 } else { 3.0 });
        let al = implication_suite(&alt, &0.0, &a, 10_000, DEFAULT_STRONG_TOL, &DEFAULT_OUTER_T_GRID, &sc).unwrap();
        assert!(al.verdicts().iter().all(|v| v.1 == Verdict::Fail));
        assert!(al.implications.iter().all(|i| i.status == ImplicationStatus::Vacuous));
    }
}
