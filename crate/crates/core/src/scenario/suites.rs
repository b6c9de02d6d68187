use std::fmt::Write as _;

use serde::Serialize;

use super::build::{Instance, ScenarioPoint};
use super::schema::{Diagnostic, Outcome};
use crate::error::{Error, Result};
use crate::statconv::{
    cauchy_exceptional_set, compact_disjoint_check, extract_full_density_subsequence, gamma_closure_check,
    is_stat_bounded, is_stat_cauchy, levy_cauchy, limit_candidates, limit_points, pairwise_distance_convergence,
    splice_on_null_set, stat_converges_to, strong_tail_check, ClusterReport, ConvergenceReport,
};
use crate::summability::{check_regularity, density, DensityEstimate, DensityVerdict, IndexSet};
use crate::summable::{implication_suite, ImplicationStatus, TransformTrace};
use crate::verdict::Verdict;

/// Largest truncation inspected by the regularity check.
const REGULARITY_ROWS: usize = 10_000;

/// Largest number of points fed to the axiom checks.
const AXIOM_POINTS: usize = 24;

/// Distance functions fed to the triangle function check.
const TAU_SAMPLES: usize = 4;

/// One pass/fail line of a scenario.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Verdict of the check itself.
    pub verdict: Verdict,
    /// Describes the instance rather than a relation that must always hold;
    /// such checks are inverted when the scenario expects failure.
    pub instance_level: bool,
    /// The verdict counted towards the scenario outcome.
    pub effective: Verdict,
}

pub(crate) struct SuiteOutput {
    pub checks: Vec<Check>,
    pub report: String,
    /// `(t, n, s_n)` of the exception sets against the limit.
    pub convergence: Vec<(f64, usize, f64)>,
    pub transform: Option<TransformTrace>,
}

struct Recorder {
    outcome: Outcome,
    checks: Vec<Check>,
    report: String,
}

impl Recorder {
    fn check(&mut self, suite: &'static str, name: impl Into<String>, verdict: Verdict, instance_level: bool) {
        let effective = if instance_level && self.outcome == Outcome::Fail { verdict.inverted() } else { verdict };
        let name = name.into();
        let tag = if instance_level && self.outcome == Outcome::Fail { " (expected to fail)" } else { "" };
        let _ = writeln!(self.report, "  {effective:<13} {name}: {verdict}{tag}");
        self.checks.push(Check { suite, name, verdict, instance_level, effective });
    }

    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.report, "    {}", text.as_ref());
    }

    fn heading(&mut self, suite: &str) {
        let _ = writeln!(self.report, "\n[{suite}]");
    }
}

fn describe(est: &DensityEstimate) -> String {
    let reading = match est.verdict {
        DensityVerdict::Zero => "zero",
        DensityVerdict::Positive => "positive",
        DensityVerdict::Indeterminate => "undecided",
    };
    format!(
        "≈ {:.5} (window {:.5}..{:.5}, oscillation {:.2e}, {reading})",
        est.value, est.window_min, est.window_max, est.oscillation
    )
}

fn show<P: ScenarioPoint>(points: &[P]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

/// `premise ⇒ conclusion` as a verdict: vacuous passes, undecided stays so.
fn implies(premise: Verdict, conclusion: Verdict) -> Verdict {
    match ImplicationStatus::evaluate(premise, conclusion) {
        ImplicationStatus::Holds | ImplicationStatus::Vacuous => Verdict::Pass,
        ImplicationStatus::Violated => Verdict::Fail,
        ImplicationStatus::Inconclusive => Verdict::Indeterminate,
    }
}

pub(crate) fn run_suites<P: ScenarioPoint>(
    inst: &Instance<P>,
    diagnostics: &[Diagnostic],
    outcome: Outcome,
) -> Result<SuiteOutput> {
    let mut r = Recorder { outcome, checks: Vec::new(), report: String::new() };
    let conv = stat_converges_to(&inst.x, &inst.limit, &inst.matrix, &inst.cfg)?;
    let convergence =
        conv.exceptions.iter().flat_map(|e| e.estimate.partial_sums.iter().map(move |&(n, s)| (e.t, n, s))).collect();
    let mut transform = None;
    let mut order: Vec<Diagnostic> = diagnostics.to_vec();
    order.sort();
    order.dedup();
    for d in order {
        r.heading(d.name());
        match d {
            Diagnostic::Regularity => regularity(inst, &mut r)?,
            Diagnostic::Axioms => axioms(inst, &mut r)?,
            Diagnostic::Convergence => convergence_suite(inst, &conv, &mut r)?,
            Diagnostic::Cauchy => cauchy(inst, &conv, &mut r)?,
            Diagnostic::Construction => construction(inst, &conv, &mut r)?,
            Diagnostic::Clusters => clusters(inst, &conv, &mut r)?,
            Diagnostic::Summability => transform = Some(summability(inst, &mut r)?),
            Diagnostic::Pair => pair(inst, &conv, &mut r)?,
        }
    }
    Ok(SuiteOutput { checks: r.checks, report: r.report, convergence, transform })
}

fn regularity<P: ScenarioPoint>(inst: &Instance<P>, r: &mut Recorder) -> Result<()> {
    let n = inst.matrix.row_limit(inst.n).min(REGULARITY_ROWS);
    let rep = check_regularity(&inst.matrix, n, inst.tol.regularity, &inst.cfg.density)?;
    for line in rep.to_string().lines() {
        r.line(line);
    }
    r.check("regularity", "consistent with a regular matrix", Verdict::from_bool(rep.consistent_with_regular()), true);
    Ok(())
}

fn axioms<P: ScenarioPoint>(inst: &Instance<P>, r: &mut Recorder) -> Result<()> {
    let step = inst.candidates.len().div_ceil(AXIOM_POINTS).max(1);
    let points: Vec<P> = inst.candidates.iter().step_by(step).cloned().collect();
    let rep = inst.space.verify_axioms(&points, inst.tol.axioms)?;
    for c in rep.checks() {
        r.line(format!("{}: {} of {} checked, {} violations", c.axiom, c.checked, c.checked, c.violations));
    }
    r.check(
        "axioms",
        format!("PM-space axioms on {} points", points.len()),
        Verdict::from_bool(rep.all_passed()),
        true,
    );

    let samples: Vec<_> = points.iter().take(TAU_SAMPLES).map(|b| inst.space.distance(&points[0], b)).collect();
    if samples.len() < 3 {
        r.line("too few points for the triangle function check");
        return Ok(());
    }
    // Non-step arguments go through a sampled convolution, accurate to a grid step.
    let tau_fn = inst.space.tau();
    let reach = samples.iter().map(|f| f.last_knot()).fold(0.0, f64::max);
    let tau_tol = if samples.iter().all(|f| f.is_step()) {
        inst.tol.axioms
    } else {
        inst.tol.axioms.max(3.0 * reach / tau_fn.grid_resolution() as f64)
    };
    r.line(format!("triangle function tolerance {tau_tol:.3e}"));
    let tau = tau_fn.check_axioms(&samples, tau_tol)?;
    for o in tau.outcomes() {
        r.line(format!("{}: {} checked, worst {:.2e}", o.axiom, o.checked, o.worst));
    }
    r.check(
        "axioms",
        format!("{} axioms on {} distance functions", tau.tau, samples.len()),
        Verdict::from_bool(tau.all_passed()),
        true,
    );
    Ok(())
}

fn convergence_suite<P: ScenarioPoint>(
    inst: &Instance<P>,
    conv: &ConvergenceReport<P>,
    r: &mut Recorder,
) -> Result<()> {
    for e in &conv.exceptions {
        r.line(format!("t = {}: |E_t| = {}, density {}", e.t, e.count, describe(&e.estimate)));
    }
    r.check("convergence", format!("A-statistically convergent to {}", inst.limit), conv.verdict, true);

    let all = limit_candidates(&inst.x, &inst.candidates, &inst.matrix, &inst.cfg)?;
    let passing: Vec<P> = all.iter().filter(|c| c.1.is_pass()).map(|c| c.0.clone()).collect();
    r.line(format!("candidates passing: {} of {}: {}", passing.len(), all.len(), show(&passing)));
    let unique = match conv.verdict {
        Verdict::Pass => passing == [inst.limit.clone()],
        _ => passing.len() <= 1,
    };
    r.check(
        "convergence",
        "exactly the limit passes when x converges, at most one candidate otherwise",
        Verdict::from_bool(unique),
        false,
    );

    let strong = strong_tail_check(&inst.x, &inst.limit, &inst.cfg);
    r.line(format!("strong tail check: {:?}", strong.last_violations));
    r.check(
        "convergence",
        "strongly convergent ⇒ A-statistically convergent",
        implies(Verdict::from_bool(strong.passed), conv.verdict),
        false,
    );
    Ok(())
}

fn cauchy<P: ScenarioPoint>(inst: &Instance<P>, conv: &ConvergenceReport<P>, r: &mut Recorder) -> Result<()> {
    let rep = is_stat_cauchy(&inst.x, &inst.matrix, &inst.cfg)?;
    let mut nested = Verdict::Pass;
    for g in &rep.per_gamma {
        r.line(format!(
            "γ = {}: anchor {:?} after {} tries, far set {}; nested {:.5} ({:?}{})",
            g.gamma,
            g.anchor,
            g.anchors_tried,
            describe(&g.far_set),
            g.nested,
            g.nested_verdict,
            if g.nested_exact { ", every j" } else { ", sampled j" }
        ));
        let agrees = match (g.verdict, g.nested_verdict) {
            (Verdict::Pass, DensityVerdict::Zero) => Verdict::Pass,
            (Verdict::Fail, DensityVerdict::Positive | DensityVerdict::Indeterminate) => Verdict::Pass,
            (Verdict::Pass, DensityVerdict::Positive) | (Verdict::Fail, DensityVerdict::Zero) => Verdict::Fail,
            _ => Verdict::Indeterminate,
        };
        nested = Verdict::all([nested, agrees]);
    }
    r.check("cauchy", "A-statistically Cauchy", rep.verdict, true);
    r.check("cauchy", "convergent ⇒ Cauchy", implies(conv.verdict, rep.verdict), false);
    r.check("cauchy", "nested density statistic agrees with the anchor check", nested, false);
    if rep.verdict.is_pass() {
        let mut pairs = Verdict::Pass;
        for &t in &inst.cfg.t_grid {
            let p = cauchy_exceptional_set(&inst.x, &inst.matrix, t, &inst.cfg)?;
            r.line(format!(
                "t = {t}: γ = {}, anchor {}, P_t density {}, {} pairs checked{}, {} violations",
                p.gamma,
                p.anchor,
                describe(&p.density),
                p.pairs_checked,
                if p.pairs_exhaustive { " (all values)" } else { " (sampled)" },
                p.pair_violations
            ));
            pairs = Verdict::all([pairs, Verdict::from_bool(p.pair_violations == 0), p.density.zero_verdict()]);
        }
        r.check("cauchy", "terms outside a null set P_t are pairwise t-close", pairs, false);
    }
    Ok(())
}

fn construction<P: ScenarioPoint>(inst: &Instance<P>, conv: &ConvergenceReport<P>, r: &mut Recorder) -> Result<()> {
    let names = [
        "full-density subsequence converges strongly",
        "subsequence converges ⇒ spliced sequence converges strongly",
        "spliced sequence equals x outside a null set",
        "null splice of a convergent subsequence ⇒ A-statistically convergent",
    ];
    let fd = match extract_full_density_subsequence(&inst.x, &inst.limit, &inst.matrix, &inst.cfg) {
        Ok(fd) => fd,
        Err(Error::TruncationTooSmall { deepest_t }) => {
            r.line(format!("thresholds reached only t = {deepest_t}"));
            r.check("construction", names[0], Verdict::Fail, true);
            r.check("construction", names[2], Verdict::Fail, true);
            r.check("construction", "convergent ⇒ construction succeeds", implies(conv.verdict, Verdict::Fail), false);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let head: Vec<usize> = fd.thresholds.iter().take(8).copied().collect();
    r.line(format!("stages reached: {}, first thresholds {:?}", fd.deepest_t(), head));
    r.line(format!("density of G {}", describe(&fd.density)));
    r.line(format!("density of the complement {}", describe(&fd.complement_density)));
    r.line(format!("tail check of the subsequence: {:?}", fd.tail.last_violations));
    r.check("construction", names[0], fd.verdict, true);

    let g = splice_on_null_set(&inst.x, &inst.limit, &fd.set);
    let tail = strong_tail_check(&g, &inst.limit, &inst.cfg);
    r.check(
        "construction",
        names[1],
        implies(Verdict::from_bool(fd.tail.passed), Verdict::from_bool(tail.passed)),
        false,
    );
    let diff = inst.x.differing_set(&g)?;
    let diff_density = density(&inst.matrix, &diff, inst.matrix.row_limit(inst.n), &inst.cfg.density)?;
    r.line(format!("density of {{k : x_k ≠ g_k}} {}", describe(&diff_density)));
    r.check("construction", names[2], diff_density.zero_verdict(), true);
    let again = stat_converges_to(&g, &inst.limit, &inst.matrix, &inst.cfg)?;
    let premise = Verdict::all([Verdict::from_bool(fd.tail.passed), diff_density.zero_verdict()]);
    r.check("construction", names[3], implies(premise, again.verdict), false);
    r.check("construction", "convergent ⇒ construction succeeds", implies(conv.verdict, fd.verdict), false);
    Ok(())
}

fn cluster_lines<P: ScenarioPoint>(rep: &ClusterReport<P>, r: &mut Recorder) {
    for s in &rep.scans {
        if !s.cluster && !s.late_hits {
            continue;
        }
        let hits: Vec<String> = s.hits.iter().map(|(t, e)| format!("{t}: {:.4}", e.value)).collect();
        let limit = match &s.limit_search {
            Some(l) => format!(", nonthin subsequence density {:.4}, accepted {}", l.density.value, l.accepted),
            None => String::new(),
        };
        r.line(format!(
            "{}: cluster {}, late hits {}, hit densities [{}]{limit}",
            s.candidate,
            s.cluster,
            s.late_hits,
            hits.join(", ")
        ));
    }
}

fn clusters<P: ScenarioPoint>(inst: &Instance<P>, conv: &ConvergenceReport<P>, r: &mut Recorder) -> Result<()> {
    let rep = limit_points(&inst.x, &inst.matrix, &inst.candidates, &inst.cfg)?;
    cluster_lines(&rep, r);
    r.line(format!("scanned {} candidates at t = {:?}", inst.candidates.len(), rep.thresholds));
    r.line(format!("limit points (heuristic search): {}", show(&rep.lambda)));
    r.line(format!("cluster points: {}", show(&rep.gamma)));
    r.line(format!("ordinary limit points: {}", show(&rep.ordinary)));
    r.check(
        "clusters",
        "limit points ⊆ cluster points ⊆ ordinary limit points",
        Verdict::from_bool(rep.containments_hold()),
        false,
    );

    let only_limit = rep.gamma == [inst.limit.clone()] && rep.lambda == [inst.limit.clone()];
    r.check(
        "clusters",
        format!("the only cluster and limit point is {}", inst.limit),
        Verdict::from_bool(only_limit),
        true,
    );
    r.check(
        "clusters",
        "convergent ⇒ single cluster and limit point",
        implies(conv.verdict, Verdict::from_bool(only_limit)),
        false,
    );

    let radius = inst.cfg.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let offenders = gamma_closure_check(&inst.space, &inst.candidates, &rep.gamma, radius);
    r.line(format!("candidates within {radius} of a cluster point but outside: {}", show(&offenders)));
    r.check("clusters", "cluster points closed on the grid", Verdict::from_bool(offenders.is_empty()), false);

    let y = inst.x.splice(&IndexSet::squares().complement(), &inst.null_value, "x modified on squares");
    let diff = inst.x.differing_set(&y)?;
    let null = density(&inst.matrix, &diff, inst.matrix.row_limit(inst.n), &inst.cfg.density)?;
    let rep_y = limit_points(&y, &inst.matrix, &inst.candidates, &inst.cfg)?;
    let same = rep_y.gamma == rep.gamma && rep_y.lambda == rep.lambda;
    r.line(format!(
        "after writing {} on the squares (difference density {}): cluster {}, limit {}",
        inst.null_value,
        describe(&null),
        show(&rep_y.gamma),
        show(&rep_y.lambda)
    ));
    r.check(
        "clusters",
        "cluster and limit points survive a null modification",
        implies(null.zero_verdict(), Verdict::from_bool(same)),
        false,
    );

    let outside: Vec<P> = inst.candidates.iter().filter(|c| !rep.gamma.contains(c)).cloned().collect();
    let m = compact_disjoint_check(&inst.x, &inst.matrix, &outside, &rep.gamma, &inst.cfg)?;
    r.line(format!("density of visits to the {} non-cluster candidates {}", outside.len(), describe(&m)));
    r.check("clusters", "finite sets avoiding the cluster points are visited on a null set", m.zero_verdict(), false);

    let bounded = is_stat_bounded(&inst.x, &inst.matrix, &inst.candidates, inst.membership_radius, &inst.cfg)?;
    r.line(format!(
        "escapes from the candidate set: {}, density {}",
        bounded.escapes,
        describe(&bounded.escape_density)
    ));
    r.check(
        "clusters",
        "statistically bounded ⇒ some cluster point",
        implies(bounded.verdict, Verdict::from_bool(!rep.gamma.is_empty())),
        false,
    );
    Ok(())
}

fn summability<P: ScenarioPoint>(inst: &Instance<P>, r: &mut Recorder) -> Result<TransformTrace> {
    let suite = implication_suite(
        &inst.x,
        &inst.limit,
        &inst.matrix,
        inst.rows,
        inst.tol.strong,
        &inst.tol.outer_t_grid,
        &inst.cfg,
    )?;
    for (name, v) in suite.verdicts() {
        r.line(format!("{name}: {v}"));
    }
    for i in &suite.implications {
        r.line(format!("{} ⇒ {}: {}", i.premise, i.conclusion, i.status));
    }
    let tail = &suite.trace.y[suite.trace.y.len().saturating_sub(3)..];
    r.line(format!("last transform values {tail:?}"));
    r.check("summability", "strongly A-summable", suite.strongly_summable, true);
    r.check("summability", "strongly statistically A-summable", suite.stat_summable, true);
    r.check("summability", "no implication violated", Verdict::from_bool(suite.no_violations()), false);
    let bounded = suite
        .trace
        .rows()
        .step_by((inst.rows / 64).max(1))
        .all(|(j, y)| y >= 0.0 && y <= inst.matrix.row_sum(j) + 1e-12);
    r.check("summability", "0 ≤ y_j ≤ row sum", Verdict::from_bool(bounded), false);
    Ok(suite.trace)
}

fn pair<P: ScenarioPoint>(inst: &Instance<P>, conv: &ConvergenceReport<P>, r: &mut Recorder) -> Result<()> {
    let Some((y, q)) = &inst.twin else {
        return Err(Error::Scenario("diagnostics: `pair` needs a [twin] sequence".into()));
    };
    let conv_y = stat_converges_to(y, q, &inst.matrix, &inst.cfg)?;
    r.line(format!("twin converges to {q}: {}", conv_y.verdict));
    let pr = pairwise_distance_convergence(&inst.x, y, &inst.limit, q, &inst.matrix, &inst.cfg)?;
    for e in &pr.exceptions {
        r.line(format!(
            "t = {}: |{{k : d_L(F_xkyk, F_pq) ≥ t}}| = {}, density {}",
            e.t,
            e.count,
            describe(&e.estimate)
        ));
    }
    let lc = levy_cauchy(&inst.x, y, &inst.matrix, &inst.cfg)?;
    r.check("pair", format!("F(x_k, y_k) → F({}, {q}) statistically", inst.limit), pr.verdict, true);
    r.check("pair", "F(x_k, y_k) is A-statistically Cauchy under d_L", lc.verdict, true);
    let both = Verdict::all([conv.verdict, conv_y.verdict]);
    r.check(
        "pair",
        "both convergent ⇒ distances converge and are Cauchy",
        implies(both, Verdict::all([pr.verdict, lc.verdict])),
        false,
    );
    Ok(())
}
