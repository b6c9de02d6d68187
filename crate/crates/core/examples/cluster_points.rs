//! Statistical cluster and limit points of a sequence visiting three values.
//!
//! cargo run --example cluster_points

use pm_statkit::pmspace::PmSpace;
use pm_statkit::statconv::{limit_points, SequenceSpec, StatConfig};
use pm_statkit::summability::{IndexSet, SummabilityMatrix};
use pm_statkit::trifn::TriangleFunction;

fn main() -> pm_statkit::Result<()> {
    let space = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::product());
    let squares = IndexSet::squares();
    let x = SequenceSpec::new(space, "x", 60_000, move |k| match k {
        k if squares.contains(k) => 7.0,
        k if k % 3 == 0 => 2.0,
        _ => 0.0,
    });
    let grid: Vec<f64> = (0..=16).map(|i| i as f64 * 0.5).collect();
    let report = limit_points(&x, &SummabilityMatrix::cesaro(), &grid, &StatConfig::default())?;
    println!("ordinary limit points: {:?}", report.ordinary);
    println!("cluster points:        {:?}", report.gamma);
    println!("limit points:          {:?}", report.lambda);
    println!("containments hold: {}", report.containments_hold());
    Ok(())
}
