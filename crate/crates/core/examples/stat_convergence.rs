//! Statistical convergence and the statistical Cauchy condition.
//!
//! cargo run --example stat_convergence

use pm_statkit::pmspace::PmSpace;
use pm_statkit::statconv::{
    is_stat_cauchy, limit_candidates, stat_converges_to, strong_tail_check, SequenceSpec, StatConfig,
};
use pm_statkit::summability::{IndexSet, SummabilityMatrix};
use pm_statkit::trifn::TriangleFunction;

fn main() -> pm_statkit::Result<()> {
    let space = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min());
    let squares = IndexSet::squares();
    let x =
        SequenceSpec::new(space, "zero off the squares", 100_000, move |k| if squares.contains(k) { 5.0 } else { 0.0 });
    let a = SummabilityMatrix::cesaro();
    let cfg = StatConfig::default();

    let report = stat_converges_to(&x, &0.0, &a, &cfg)?;
    for e in &report.exceptions {
        println!("t = {:<5} |E_t| = {:<4} density ≈ {:.5}", e.t, e.count, e.estimate.value);
    }
    println!("statistically convergent to 0: {}", report.verdict);
    println!("strongly convergent: {}", strong_tail_check(&x, &0.0, &cfg).passed);
    println!("statistically Cauchy: {}", is_stat_cauchy(&x, &a, &cfg)?.verdict);

    let grid: Vec<f64> = (0..=12).map(|i| i as f64 * 0.5).collect();
    for (c, v) in limit_candidates(&x, &grid, &a, &cfg)? {
        if v.is_pass() {
            println!("limit candidate {c} passes");
        }
    }
    Ok(())
}
