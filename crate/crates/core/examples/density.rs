//! Matrix densities of index sets, read from partial sums.
//!
//! cargo run --example density

use pm_statkit::summability::{density, DensityConfig, IndexSet, SummabilityMatrix};

fn main() -> pm_statkit::Result<()> {
    let cfg = DensityConfig::default();
    let n = 100_000;
    let matrices = [SummabilityMatrix::cesaro(), SummabilityMatrix::from_id("lambda:sqrt")?];
    let sets = [IndexSet::evens(), IndexSet::progression(3, 1)?, IndexSet::squares(), IndexSet::cubes()];
    for a in &matrices {
        for b in &sets {
            let est = density(a, b, n, &cfg)?;
            println!(
                "δ_{}({:<16}) ≈ {:.5}  window [{:.5}, {:.5}]  {:?}",
                a.name(),
                b.name(),
                est.value,
                est.window_min,
                est.window_max,
                est.verdict
            );
        }
    }
    Ok(())
}
