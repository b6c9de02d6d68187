//! Declarative scenario files: a space, a matrix, a sequence and the
//! diagnostics to run on it, plus the report and CSV artifacts of a run.
//!
//! ```
//! use pm_statkit::scenario::{builtin, run_scenario, RunOptions};
//! use pm_statkit::Verdict;
//!
//! let file = builtin("constant_lukasiewicz").unwrap().unwrap();
//! let out = run_scenario(&file, &RunOptions::default()).unwrap();
//! assert_eq!(out.verdict, Verdict::Pass);
//! ```

mod build;
mod schema;
mod suites;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

pub use build::ScenarioPoint;
pub use schema::{
    CandidatesDesc, Diagnostic, ExpectDesc, MatrixDesc, Outcome, Pattern, PerturbDesc, ScenarioFile, SequenceDesc,
    SpaceDesc, SpaceKind, Tolerances, TruncationDesc, SCHEMA_VERSION,
};
pub use suites::Check;

use crate::error::{Error, Result};
use crate::summability::{BUILTIN_INDEX_SETS, BUILTIN_MATRICES};
use crate::verdict::Verdict;
use build::{finite_instance, invalid, reals_instance, Instance};

/// Scenarios shipped with the crate, by name.
pub const BUILTIN_SCENARIOS: &[(&str, &str)] = &[
    ("alternating_negative", include_str!("../../scenarios/alternating_negative.toml")),
    ("column_spike_negative", include_str!("../../scenarios/column_spike_negative.toml")),
    ("constant_lukasiewicz", include_str!("../../scenarios/constant_lukasiewicz.toml")),
    ("doubled_cesaro_negative", include_str!("../../scenarios/doubled_cesaro_negative.toml")),
    ("drift_lambda", include_str!("../../scenarios/drift_lambda.toml")),
    ("evens_negative", include_str!("../../scenarios/evens_negative.toml")),
    ("finite_space", include_str!("../../scenarios/finite_space.toml")),
    ("lacunary_cubes", include_str!("../../scenarios/lacunary_cubes.toml")),
    ("pair_squares", include_str!("../../scenarios/pair_squares.toml")),
    ("random_sparse", include_str!("../../scenarios/random_sparse.toml")),
    ("simple_ramp", include_str!("../../scenarios/simple_ramp.toml")),
    ("squares_cesaro", include_str!("../../scenarios/squares_cesaro.toml")),
    ("squares_lambda_sqrt", include_str!("../../scenarios/squares_lambda_sqrt.toml")),
    ("two_clusters_negative", include_str!("../../scenarios/two_clusters_negative.toml")),
];

/// Parses and validates a scenario; `origin` names it in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioFile> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Scenario(format!("{origin}: {e}")))?;
    validate(&file).map_err(|e| match e {
        Error::Scenario(msg) => Error::Scenario(format!("{origin}: {msg}")),
        other => other,
    })?;
    Ok(file)
}

fn validate(file: &ScenarioFile) -> Result<()> {
    if file.schema != SCHEMA_VERSION {
        return invalid("schema", format!("version {} is not supported (expected {SCHEMA_VERSION})", file.schema));
    }
    let name_ok = !file.name.is_empty() && file.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if !name_ok {
        return invalid("name", "use letters, digits, '_' and '-' only");
    }
    if file.diagnostics.is_empty() {
        return invalid("diagnostics", "list at least one diagnostic");
    }
    if file.diagnostics.contains(&Diagnostic::Pair) != file.twin.is_some() {
        return invalid("twin", "a twin sequence goes with the `pair` diagnostic and nothing else");
    }
    Ok(())
}

/// A builtin scenario by name; `None` when no builtin has that name.
pub fn builtin(name: &str) -> Option<Result<ScenarioFile>> {
    BUILTIN_SCENARIOS.iter().find(|(n, _)| *n == name).map(|(n, text)| parse_scenario(text, &format!("builtin {n}")))
}

/// Reads `arg` as a file path, falling back to a builtin name.
pub fn load_scenario(arg: &str) -> Result<ScenarioFile> {
    let path = Path::new(arg);
    if path.exists() {
        return parse_scenario(&fs::read_to_string(path)?, arg);
    }
    builtin(arg).unwrap_or_else(|| Err(Error::Scenario(format!("{arg}: no such file or builtin scenario"))))
}

/// Overrides applied on top of a scenario file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Replaces `truncation.n`; rows are clamped to what it supports.
    pub truncation: Option<usize>,
}

/// Result of one scenario run with its rendered artifacts.
#[derive(Clone, Debug)]
pub struct ScenarioOutcome {
    pub name: String,
    pub expect: Outcome,
    /// Pass when every counted check passes.
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub report: String,
    pub summary: String,
    /// `t,n,s_n` rows of the exception sets against the limit.
    pub convergence_csv: String,
    /// `j,y_j` rows of the transform, when summability ran.
    pub transform_csv: Option<String>,
}

impl ScenarioOutcome {
    /// Writes `report.txt`, `summary.toml`, `convergence.csv` and, when
    /// present, `transform.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), &self.report)?;
        fs::write(dir.join("summary.toml"), &self.summary)?;
        fs::write(dir.join("convergence.csv"), &self.convergence_csv)?;
        if let Some(t) = &self.transform_csv {
            fs::write(dir.join("transform.csv"), t)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    name: &'a str,
    schema: u32,
    expect: Outcome,
    verdict: Verdict,
    seed: u64,
    space: &'a str,
    tau: String,
    tau_defaulted: bool,
    matrix: &'a str,
    n: usize,
    rows: usize,
    tolerances: &'a Tolerances,
    checks: &'a [Check],
}

pub fn run_scenario(file: &ScenarioFile, opts: &RunOptions) -> Result<ScenarioOutcome> {
    let seed = opts.seed.or(file.seed).unwrap_or(0);
    match file.space.kind {
        SpaceKind::Reals => finish(file, reals_instance(file, seed, opts.truncation)?),
        SpaceKind::Finite => finish(file, finite_instance(file, seed, opts.truncation)?),
    }
}

fn finish<P: ScenarioPoint>(file: &ScenarioFile, inst: Instance<P>) -> Result<ScenarioOutcome> {
    let expect = file.expect.outcome;
    let out = suites::run_suites(&inst, &file.diagnostics, expect)?;
    let verdict = Verdict::all(out.checks.iter().map(|c| c.effective));
    let tau = inst.space.tau().name();

    let mut report = String::new();
    let w = &mut report;
    let _ = writeln!(w, "scenario {}: {verdict}", file.name);
    if !file.description.is_empty() {
        let _ = writeln!(w, "{}", file.description.trim());
    }
    let _ = writeln!(w, "space: {}", inst.space_label);
    let _ = writeln!(
        w,
        "triangle function: {tau}{}",
        if inst.tau_defaulted { " (default, not given in the file)" } else { "" }
    );
    let _ = writeln!(w, "matrix: {}", inst.matrix.name());
    let _ = writeln!(w, "sequence: {} terms, limit candidate {}", inst.n, inst.limit);
    let _ = writeln!(w, "transform rows: {}", inst.rows);
    let _ = writeln!(w, "seed: {}", inst.seed);
    let _ = writeln!(w, "expected outcome: {}", if expect == Outcome::Pass { "pass" } else { "fail" });
    let t = &inst.tol;
    let _ = writeln!(
        w,
        "tolerances: ratio {}, window {}, oscillation {}, zero {}, nonthin floor {}, strong {}, regularity {}, axioms {}, tail fraction {}",
        t.ratio, t.window, t.osc, t.zero, t.nonthin_floor, t.strong, t.regularity, t.axioms, t.tail_fraction
    );
    let _ = writeln!(w, "t grid: {:?}, outer t grid: {:?}", t.t_grid, t.outer_t_grid);
    let _ = writeln!(w, "verdicts are read on a finite truncation, not proved");
    report.push_str(&out.report);

    let summary = toml::to_string(&Summary {
        name: &file.name,
        schema: SCHEMA_VERSION,
        expect,
        verdict,
        seed: inst.seed,
        space: &inst.space_label,
        tau,
        tau_defaulted: inst.tau_defaulted,
        matrix: inst.matrix.name(),
        n: inst.n,
        rows: inst.rows,
        tolerances: &inst.tol,
        checks: &out.checks,
    })
    .map_err(|e| Error::Scenario(format!("summary: {e}")))?;

    let mut conv = csv::Writer::from_writer(Vec::new());
    conv.write_record(["t", "n", "s_n"])?;
    for (t, n, s) in &out.convergence {
        conv.write_record([t.to_string(), n.to_string(), s.to_string()])?;
    }
    let transform_csv = match &out.transform {
        Some(trace) => {
            let mut tw = csv::Writer::from_writer(Vec::new());
            tw.write_record(["j", "y_j"])?;
            for (j, y) in trace.rows() {
                tw.write_record([j.to_string(), y.to_string()])?;
            }
            Some(into_string(tw)?)
        }
        None => None,
    };

    Ok(ScenarioOutcome {
        name: file.name.clone(),
        expect,
        verdict,
        checks: out.checks,
        report,
        summary,
        convergence_csv: into_string(conv)?,
        transform_csv,
    })
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Process exit code for a batch: 1 for any error, then 2 for any failure,
/// 3 for any indeterminate run, 0 otherwise.
pub fn exit_code(results: &[Result<ScenarioOutcome>]) -> i32 {
    let mut code = 0;
    for r in results {
        let c = match r {
            Err(_) => 1,
            Ok(o) => match o.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 2,
                Verdict::Indeterminate => 3,
            },
        };
        code = match (code, c) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            (3, _) | (_, 3) => 3,
            _ => 0,
        };
    }
    code
}

/// Every id a scenario file may name, in a stable order.
pub fn list_builtins() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "spaces:");
    let _ = writeln!(s, "  reals          the real line, |a - b|; `profile = \"ramp:<scale>\"` for a simple space");
    let _ = writeln!(s, "  finite         named points with a metric table");
    let _ = writeln!(s, "triangle functions:");
    for t in ["min", "product", "lukasiewicz"] {
        let _ = writeln!(s, "  {t}");
    }
    let section = |s: &mut String, title: &str, items: &[(&str, &str)]| {
        let _ = writeln!(s, "{title}:");
        for (id, about) in items {
            let _ = writeln!(s, "  {id:<22} {about}");
        }
    };
    section(&mut s, "matrices", BUILTIN_MATRICES);
    section(&mut s, "index sets", BUILTIN_INDEX_SETS);
    let _ = writeln!(s, "scenarios:");
    for (name, text) in BUILTIN_SCENARIOS {
        let about = parse_scenario(text, name).map(|f| f.description.lines().next().unwrap_or("").to_string());
        let _ = writeln!(s, "  {name:<24} {}", about.unwrap_or_default());
    }
    let _ = writeln!(s, "diagnostics:");
    for d in [
        Diagnostic::Regularity,
        Diagnostic::Axioms,
        Diagnostic::Convergence,
        Diagnostic::Cauchy,
        Diagnostic::Construction,
        Diagnostic::Clusters,
        Diagnostic::Summability,
        Diagnostic::Pair,
    ] {
        let _ = writeln!(s, "  {}", d.name());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema = 1
name = "tiny"
diagnostics = ["convergence"]
[space]
kind = "reals"
[matrix]
id = "cesaro"
[sequence]
base = 0.0
limit = 0.0
[truncation]
n = 2000
"#;

    #[test]
    fn minimal_file_runs_and_flags_default_tau() {
        let f = parse_scenario(MINIMAL, "test").unwrap();
        let out = run_scenario(&f, &RunOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Pass);
        assert!(out.report.contains("(default, not given in the file)"));
        assert!(out.convergence_csv.starts_with("t,n,s_n\n"));
        assert!(out.transform_csv.is_none());
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let extra = MINIMAL.replace("name = \"tiny\"", "name = \"tiny\"\ncolour = 3");
        assert!(matches!(parse_scenario(&extra, "t"), Err(Error::Scenario(_))));
        let v2 = MINIMAL.replace("schema = 1", "schema = 2");
        assert!(parse_scenario(&v2, "t").unwrap_err().to_string().contains("schema"));
        let bad = MINIMAL.replace("cesaro", "borel");
        let f = parse_scenario(&bad, "t").unwrap();
        assert!(run_scenario(&f, &RunOptions::default()).is_err());
    }

    #[test]
    fn every_builtin_parses() {
        for (name, _) in BUILTIN_SCENARIOS {
            let f = builtin(name).unwrap().unwrap();
            assert_eq!(&f.name, name);
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn exit_code_precedence() {
        let f = parse_scenario(MINIMAL, "t").unwrap();
        let ok = run_scenario(&f, &RunOptions::default()).unwrap();
        let mut failed = ok.clone();
        failed.verdict = Verdict::Fail;
        let mut unsure = ok.clone();
        unsure.verdict = Verdict::Indeterminate;
        assert_eq!(exit_code(&[Ok(ok.clone())]), 0);
        assert_eq!(exit_code(&[Ok(ok.clone()), Ok(unsure.clone())]), 3);
        assert_eq!(exit_code(&[Ok(unsure), Ok(failed.clone())]), 2);
        assert_eq!(exit_code(&[Ok(failed), Err(Error::Scenario("x".into()))]), 1);
    }

    #[test]
    fn list_is_stable() {
        let a = list_builtins();
        assert_eq!(a, list_builtins());
        assert!(a.contains("cesaro") && a.contains("squares") && a.contains("squares_cesaro"));
    }
}
