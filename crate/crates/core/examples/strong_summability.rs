//! Transforms y_j = Σ_k a_jk d_L(F_{x_k L}, ε_0) and the implications between
//! convergence and summability.
//!
//! cargo run --example strong_summability

use pm_statkit::pmspace::PmSpace;
use pm_statkit::statconv::{SequenceSpec, StatConfig};
use pm_statkit::summability::{IndexSet, SummabilityMatrix};
use pm_statkit::summable::{implication_suite, DEFAULT_OUTER_T_GRID, DEFAULT_STRONG_TOL};
use pm_statkit::trifn::TriangleFunction;

fn main() -> pm_statkit::Result<()> {
    let space = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min());
    let squares = IndexSet::squares();
    let x = SequenceSpec::new(space, "x", 100_000, move |k| if squares.contains(k) { 3.0 } else { 0.0 });
    let a = SummabilityMatrix::cesaro();

    let suite =
        implication_suite(&x, &0.0, &a, 100_000, DEFAULT_STRONG_TOL, &DEFAULT_OUTER_T_GRID, &StatConfig::default())?;
    for (name, v) in suite.verdicts() {
        println!("{name:<36} {v}");
    }
    for i in &suite.implications {
        println!("{} ⇒ {}: {}", i.premise, i.conclusion, i.status);
    }
    for (j, y) in suite.trace.rows().filter(|(j, _)| [10, 100, 1_000, 10_000, 100_000].contains(j)) {
        println!("y_{j} = {y:.5}");
    }
    Ok(())
}
