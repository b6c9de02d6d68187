//! A convergent subsequence of full density, and the sequence obtained by
//! splicing the limit into its complement.
//!
//! cargo run --example full_density_subsequence

use pm_statkit::pmspace::PmSpace;
use pm_statkit::statconv::{
    extract_full_density_subsequence, splice_on_null_set, strong_tail_check, SequenceSpec, StatConfig,
};
use pm_statkit::summability::{IndexSet, SummabilityMatrix};
use pm_statkit::trifn::TriangleFunction;

fn main() -> pm_statkit::Result<()> {
    let space = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min());
    let squares = IndexSet::squares();
    let x =
        SequenceSpec::new(
            space,
            "x",
            100_000,
            move |k| if squares.contains(k) { 1.0 + 1.0 / k as f64 } else { 1.0 / k as f64 },
        );
    let a = SummabilityMatrix::cesaro();
    let cfg = StatConfig::default();

    let fd = extract_full_density_subsequence(&x, &0.0, &a, &cfg)?;
    let head: Vec<usize> = fd.thresholds.iter().take(10).copied().collect();
    println!("stage starts: {head:?} … ({} stages)", fd.deepest_t());
    println!("density of the subsequence ≈ {:.5}, of the rest ≈ {:.5}", fd.density.value, fd.complement_density.value);
    println!("verdict: {}", fd.verdict);

    let g = splice_on_null_set(&x, &0.0, &fd.set);
    println!("spliced sequence converges strongly: {}", strong_tail_check(&g, &0.0, &cfg).passed);
    Ok(())
}
