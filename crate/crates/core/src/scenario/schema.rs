use serde::{Deserialize, Serialize};

use crate::statconv::DEFAULT_T_GRID;

/// Schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

/// A scenario file as parsed, before ids are resolved.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Seed for randomized index sets; the command line may override it.
    pub seed: Option<u64>,
    pub space: SpaceDesc,
    pub matrix: MatrixDesc,
    pub sequence: SequenceDesc,
    /// Second sequence for the paired diagnostics.
    pub twin: Option<SequenceDesc>,
    pub truncation: TruncationDesc,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub candidates: CandidatesDesc,
    #[serde(default)]
    pub expect: ExpectDesc,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    /// The real line with `|a - b|`.
    Reals,
    /// Named points with an explicit metric table.
    Finite,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub kind: SpaceKind,
    /// `min`, `product` or `lukasiewicz`; `min` when absent.
    pub tau: Option<String>,
    /// `ramp:<scale>` makes the simple space generated by that profile;
    /// absent means the metric-induced space.
    pub profile: Option<String>,
    /// Point names of a finite space.
    pub points: Option<Vec<String>>,
    /// Symmetric distance table of a finite space, rows in point order.
    pub metric: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDesc {
    pub id: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    /// `x_k = base`.
    #[default]
    Constant,
    /// `x_k = cycle[(k - 1) mod len]`.
    Cycle,
    /// `x_k = base + amplitude · k^(-power)`, reals only.
    Drift,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDesc {
    pub base: toml::Value,
    #[serde(default)]
    pub pattern: Pattern,
    pub cycle: Option<Vec<toml::Value>>,
    pub amplitude: Option<f64>,
    pub power: Option<f64>,
    /// Applied in order; later entries win.
    #[serde(default)]
    pub perturb: Vec<PerturbDesc>,
    /// The point the diagnostics test convergence to.
    pub limit: toml::Value,
    /// Value written on the squares for the null-modification check.
    pub null_value: Option<toml::Value>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbDesc {
    /// A builtin index set id.
    pub on: Option<String>,
    /// An explicit index list.
    pub indices: Option<Vec<usize>>,
    pub value: toml::Value,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationDesc {
    /// Sequence length `N`.
    pub n: usize,
    /// Transform rows `J`; the largest row the sequence supports when absent.
    pub rows: Option<usize>,
}

/// Numerical knobs, every one of which is echoed in the report.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub ratio: f64,
    pub window: usize,
    pub osc: f64,
    pub zero: f64,
    pub nonthin_floor: f64,
    pub strong: f64,
    pub regularity: f64,
    pub axioms: f64,
    pub tail_fraction: f64,
    pub t_grid: Vec<f64>,
    pub outer_t_grid: Vec<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ratio: 1.25,
            window: 12,
            osc: 5e-3,
            zero: 2e-2,
            nonthin_floor: 0.01,
            strong: crate::summable::DEFAULT_STRONG_TOL,
            regularity: 1e-2,
            axioms: 1e-9,
            tail_fraction: 0.5,
            t_grid: DEFAULT_T_GRID.to_vec(),
            outer_t_grid: crate::summable::DEFAULT_OUTER_T_GRID.to_vec(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidatesDesc {
    /// Uniform grid `start, start + step, …, stop` on the reals.
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    #[serde(default)]
    pub extra: Vec<toml::Value>,
    /// Add distinct sequence values whose share of the terms is at least
    /// `multiplicity_floor`.
    #[serde(default = "yes")]
    pub include_values: bool,
    #[serde(default = "default_floor")]
    pub multiplicity_floor: f64,
}

fn yes() -> bool {
    true
}

fn default_floor() -> f64 {
    0.01
}

impl Default for CandidatesDesc {
    fn default() -> Self {
        CandidatesDesc {
            start: None,
            stop: None,
            step: None,
            extra: Vec::new(),
            include_values: true,
            multiplicity_floor: default_floor(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// Every instance-level check should pass.
    #[default]
    Pass,
    /// Every instance-level check should fail; consistency checks still
    /// have to pass.
    Fail,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectDesc {
    #[serde(default)]
    pub outcome: Outcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagnostic {
    Regularity,
    Axioms,
    Convergence,
    Cauchy,
    Construction,
    Clusters,
    Summability,
    Pair,
}

impl Diagnostic {
    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::Regularity => "regularity",
            Diagnostic::Axioms => "axioms",
            Diagnostic::Convergence => "convergence",
            Diagnostic::Cauchy => "cauchy",
            Diagnostic::Construction => "construction",
            Diagnostic::Clusters => "clusters",
            Diagnostic::Summability => "summability",
            Diagnostic::Pair => "pair",
        }
    }
}
