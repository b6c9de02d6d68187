use std::collections::HashMap;
use std::fmt;

use super::schema::{CandidatesDesc, Pattern, ScenarioFile, SequenceDesc, SpaceDesc, Tolerances};
use crate::error::{Error, Result};
use crate::levy::Ddf;
use crate::pmspace::{PmSpace, Point};
use crate::statconv::{SequenceSpec, StatConfig};
use crate::summability::{DensityConfig, IndexSet, SummabilityMatrix};
use crate::trifn::TriangleFunction;

pub(crate) fn invalid<T>(field: &str, msg: impl fmt::Display) -> Result<T> {
    Err(Error::Scenario(format!("{field}: {msg}")))
}

/// Point types a scenario can be written over.
pub trait ScenarioPoint: Point + fmt::Display {
    fn parse(v: &toml::Value) -> std::result::Result<Self, String>;

    /// `base + amplitude · k^(-power)`, where the ground set allows it.
    fn drift(base: &Self, amplitude: f64, power: f64, k: usize) -> Option<Self>;
}

impl ScenarioPoint for f64 {
    fn parse(v: &toml::Value) -> std::result::Result<Self, String> {
        match v {
            toml::Value::Float(x) if x.is_finite() => Ok(*x),
            toml::Value::Integer(i) => Ok(*i as f64),
            other => Err(format!("expected a finite number, found {other}")),
        }
    }

    fn drift(base: &Self, amplitude: f64, power: f64, k: usize) -> Option<Self> {
        Some(base + amplitude * (k as f64).powf(-power))
    }
}

impl ScenarioPoint for String {
    fn parse(v: &toml::Value) -> std::result::Result<Self, String> {
        match v {
            toml::Value::String(s) => Ok(s.clone()),
            other => Err(format!("expected a point name, found {other}")),
        }
    }

    fn drift(_: &Self, _: f64, _: f64, _: usize) -> Option<Self> {
        None
    }
}

/// A scenario with every id resolved.
pub(crate) struct Instance<P> {
    pub space: PmSpace<P>,
    pub tau_defaulted: bool,
    pub space_label: String,
    pub matrix: SummabilityMatrix,
    pub x: SequenceSpec<P>,
    pub limit: P,
    pub twin: Option<(SequenceSpec<P>, P)>,
    pub candidates: Vec<P>,
    pub null_value: P,
    /// Membership radius for boundedness checks on continuous ground sets.
    pub membership_radius: Option<f64>,
    pub n: usize,
    pub rows: usize,
    pub cfg: StatConfig,
    pub tol: Tolerances,
    pub seed: u64,
}

pub(crate) fn tau_of(desc: &SpaceDesc) -> Result<(TriangleFunction, bool)> {
    match &desc.tau {
        None => Ok((TriangleFunction::min(), true)),
        Some(name) => match TriangleFunction::from_name(name) {
            Ok(t) => Ok((t, false)),
            Err(e) => invalid("space.tau", e),
        },
    }
}

fn profile_of(desc: &SpaceDesc) -> Result<Option<Ddf>> {
    let Some(p) = &desc.profile else { return Ok(None) };
    let scale = match p.split_once(':') {
        Some(("ramp", s)) => s.parse::<f64>().ok(),
        _ => None,
    };
    match scale.map(Ddf::ramp) {
        Some(Ok(g)) => Ok(Some(g)),
        _ => invalid("space.profile", format!("expected `ramp:<positive scale>`, found `{p}`")),
    }
}

fn make_space<P, M>(label: String, metric: M, desc: &SpaceDesc) -> Result<(PmSpace<P>, bool)>
where
    P: Point,
    M: Fn(&P, &P) -> f64 + Send + Sync + 'static,
{
    let (tau, defaulted) = tau_of(desc)?;
    let space = match profile_of(desc)? {
        None => PmSpace::metric_induced(label, metric, tau),
        Some(g) => match PmSpace::simple(label, metric, g, tau) {
            Ok(s) => s,
            Err(e) => return invalid("space.profile", e),
        },
    };
    Ok((space, defaulted))
}

pub(crate) fn reals_space(desc: &SpaceDesc) -> Result<(PmSpace<f64>, bool)> {
    if desc.points.is_some() || desc.metric.is_some() {
        return invalid("space", "`points` and `metric` apply only to kind = \"finite\"");
    }
    let label = match &desc.profile {
        Some(p) => format!("reals/simple({p})"),
        None => "reals".to_string(),
    };
    make_space(label, |a: &f64, b: &f64| (a - b).abs(), desc)
}

pub(crate) fn finite_space(desc: &SpaceDesc) -> Result<(PmSpace<String>, bool, Vec<String>)> {
    let Some(points) = desc.points.clone() else { return invalid("space.points", "required for a finite space") };
    let Some(metric) = desc.metric.clone() else { return invalid("space.metric", "required for a finite space") };
    let n = points.len();
    if n < 2 {
        return invalid("space.points", "a finite space needs at least two points");
    }
    if metric.len() != n || metric.iter().any(|r| r.len() != n) {
        return invalid("space.metric", format!("expected a {n}×{n} table"));
    }
    for (i, row) in metric.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if !(d.is_finite() && d >= 0.0) || d != metric[j][i] || (i == j) != (d == 0.0) {
                return invalid(
                    &format!("space.metric[{i}][{j}]"),
                    "entries must be finite, symmetric, zero exactly on the diagonal",
                );
            }
        }
    }
    let index: HashMap<String, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    if index.len() != n {
        return invalid("space.points", "point names must be distinct");
    }
    let lookup = move |a: &String, b: &String| match (index.get(a), index.get(b)) {
        (Some(&i), Some(&j)) => metric[i][j],
        _ => f64::NAN,
    };
    let (space, defaulted) = make_space(format!("finite({})", points.join(",")), lookup, desc)?;
    Ok((space, defaulted, points))
}

fn point<P: ScenarioPoint>(v: &toml::Value, field: &str, valid: &dyn Fn(&P) -> bool) -> Result<P> {
    match P::parse(v) {
        Ok(p) if valid(&p) => Ok(p),
        Ok(p) => invalid(field, format!("`{p}` is not a point of the space")),
        Err(e) => invalid(field, e),
    }
}

fn sequence<P: ScenarioPoint>(
    desc: &SequenceDesc,
    field: &str,
    space: &PmSpace<P>,
    n: usize,
    seed: u64,
    label: &str,
    valid: &dyn Fn(&P) -> bool,
) -> Result<(SequenceSpec<P>, P)> {
    let base: P = point(&desc.base, &format!("{field}.base"), valid)?;
    let limit: P = point(&desc.limit, &format!("{field}.limit"), valid)?;
    let mut terms: Vec<P> = match desc.pattern {
        Pattern::Constant => vec![base.clone(); n],
        Pattern::Cycle => {
            let Some(cycle) = &desc.cycle else {
                return invalid(&format!("{field}.cycle"), "required by pattern = \"cycle\"");
            };
            if cycle.is_empty() {
                return invalid(&format!("{field}.cycle"), "must not be empty");
            }
            let values: Vec<P> = cycle
                .iter()
                .enumerate()
                .map(|(i, v)| point(v, &format!("{field}.cycle[{i}]"), valid))
                .collect::<Result<_>>()?;
            (0..n).map(|i| values[i % values.len()].clone()).collect()
        }
        Pattern::Drift => {
            let amplitude = desc.amplitude.unwrap_or(1.0);
            let power = desc.power.unwrap_or(1.0);
            if !(amplitude.is_finite() && power > 0.0) {
                return invalid(&format!("{field}.power"), "drift needs a finite amplitude and positive power");
            }
            match (1..=n).map(|k| P::drift(&base, amplitude, power, k)).collect::<Option<Vec<P>>>() {
                Some(v) => v,
                None => return invalid(&format!("{field}.pattern"), "drift applies only to the reals"),
            }
        }
    };
    for (i, p) in desc.perturb.iter().enumerate() {
        let f = format!("{field}.perturb[{i}]");
        let value: P = point(&p.value, &format!("{f}.value"), valid)?;
        let set = match (&p.on, &p.indices) {
            (Some(id), None) => match IndexSet::builtin(id, seed, n) {
                Ok(s) => s,
                Err(e) => return invalid(&format!("{f}.on"), e),
            },
            (None, Some(list)) => IndexSet::explicit(list.iter().copied()),
            _ => return invalid(&f, "give exactly one of `on` and `indices`"),
        };
        for (slot, hit) in terms.iter_mut().zip(set.bits(n)) {
            if hit {
                *slot = value.clone();
            }
        }
    }
    Ok((SequenceSpec::from_points(space.clone(), label, terms), limit))
}

fn reals_candidates(
    desc: &CandidatesDesc,
    x: &SequenceSpec<f64>,
    limit: f64,
    n: usize,
) -> Result<(Vec<f64>, Option<f64>)> {
    let mut out: Vec<f64> = vec![limit];
    let radius = match (desc.start, desc.stop, desc.step) {
        (Some(a), Some(b), Some(h)) => {
            if !(h > 0.0 && b >= a && ((b - a) / h) < 10_000.0) {
                return invalid("candidates", "need step > 0, stop ≥ start and at most 10000 grid points");
            }
            let count = ((b - a) / h + 1e-9).floor() as usize;
            out.extend((0..=count).map(|i| a + i as f64 * h));
            Some(h / 2.0)
        }
        (None, None, None) => None,
        _ => return invalid("candidates", "`start`, `stop` and `step` go together"),
    };
    for (i, v) in desc.extra.iter().enumerate() {
        out.push(point(v, &format!("candidates.extra[{i}]"), &|_: &f64| true)?);
    }
    if desc.include_values {
        if let Some(codes) = x.value_codes() {
            let mut counts = vec![0usize; codes.values.len()];
            for &c in &codes.codes {
                counts[c as usize] += 1;
            }
            for (v, &c) in codes.values.iter().zip(&counts) {
                if c as f64 >= desc.multiplicity_floor * n as f64 {
                    out.push(*v);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| (*b - *a).abs() < 1e-9);
    Ok((out, radius))
}

fn stat_config(tol: &Tolerances) -> Result<StatConfig> {
    let cfg = StatConfig {
        density: DensityConfig {
            ratio: tol.ratio,
            window: tol.window,
            osc_tol: tol.osc,
            zero_tol: tol.zero,
            nonthin_floor: tol.nonthin_floor,
        },
        t_grid: tol.t_grid.clone(),
        tail_fraction: tol.tail_fraction,
        ..StatConfig::default()
    };
    if !(tol.ratio > 1.0) || tol.window == 0 {
        return invalid("tolerances", "ratio must exceed 1 and window must be positive");
    }
    if tol.outer_t_grid.is_empty() || tol.outer_t_grid.iter().any(|t| !(*t > 0.0)) {
        return invalid("tolerances.outer_t_grid", "must be nonempty and positive");
    }
    match cfg.check() {
        Ok(()) => Ok(cfg),
        Err(e) => invalid("tolerances", e),
    }
}

struct Common {
    matrix: SummabilityMatrix,
    n: usize,
    rows: usize,
    cfg: StatConfig,
}

fn common(file: &ScenarioFile, truncation: Option<usize>) -> Result<Common> {
    let matrix = match SummabilityMatrix::from_id(&file.matrix.id) {
        Ok(m) => m,
        Err(e) => return invalid("matrix.id", e),
    };
    let n = truncation.unwrap_or(file.truncation.n);
    let usable = matrix.row_limit(n);
    if usable < 10 {
        return invalid("truncation.n", format!("{n} terms support only {usable} rows of {}", matrix.name()));
    }
    let rows = match file.truncation.rows {
        Some(r) if truncation.is_none() && r > usable => {
            return invalid("truncation.rows", format!("{r} rows need more than the {n} terms given"));
        }
        Some(r) => r.min(usable),
        None => usable,
    };
    if rows < 10 {
        return invalid("truncation.rows", "at least 10 rows are needed");
    }
    Ok(Common { matrix, n, rows, cfg: stat_config(&file.tolerances)? })
}

pub(crate) fn reals_instance(file: &ScenarioFile, seed: u64, truncation: Option<usize>) -> Result<Instance<f64>> {
    let (space, tau_defaulted) = reals_space(&file.space)?;
    let c = common(file, truncation)?;
    let ok = |_: &f64| true;
    let (x, limit) = sequence(&file.sequence, "sequence", &space, c.n, seed, "x", &ok)?;
    let twin = match &file.twin {
        Some(t) => Some(sequence(t, "twin", &space, c.n, seed, "y", &ok)?),
        None => None,
    };
    let null_value = match &file.sequence.null_value {
        Some(v) => point(v, "sequence.null_value", &ok)?,
        None => 1000.0,
    };
    let (candidates, radius) = reals_candidates(&file.candidates, &x, limit, c.n)?;
    let min_t = c.cfg.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Instance {
        space_label: space.label().to_string(),
        space,
        tau_defaulted,
        matrix: c.matrix,
        x,
        limit,
        twin,
        candidates,
        null_value,
        membership_radius: Some(radius.unwrap_or(min_t)),
        n: c.n,
        rows: c.rows,
        cfg: c.cfg,
        tol: file.tolerances.clone(),
        seed,
    })
}

pub(crate) fn finite_instance(file: &ScenarioFile, seed: u64, truncation: Option<usize>) -> Result<Instance<String>> {
    let (space, tau_defaulted, points) = finite_space(&file.space)?;
    let c = common(file, truncation)?;
    if file.candidates.start.is_some() || file.candidates.step.is_some() {
        return invalid("candidates", "a finite space uses all of its points as candidates");
    }
    let ok = |p: &String| points.contains(p);
    let (x, limit) = sequence(&file.sequence, "sequence", &space, c.n, seed, "x", &ok)?;
    let twin = match &file.twin {
        Some(t) => Some(sequence(t, "twin", &space, c.n, seed, "y", &ok)?),
        None => None,
    };
    let null_value = match &file.sequence.null_value {
        Some(v) => point(v, "sequence.null_value", &ok)?,
        None => points.last().cloned().expect("at least two points"),
    };
    Ok(Instance {
        space_label: space.label().to_string(),
        space,
        tau_defaulted,
        matrix: c.matrix,
        x,
        limit,
        twin,
        candidates: points,
        null_value,
        membership_radius: None,
        n: c.n,
        rows: c.rows,
        cfg: c.cfg,
        tol: file.tolerances.clone(),
        seed,
    })
}
