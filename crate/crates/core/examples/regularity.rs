//! Truncated regularity checks for the builtin matrices.
//!
//! cargo run --example regularity

use pm_statkit::summability::{check_regularity, DensityConfig, SummabilityMatrix};

fn main() -> pm_statkit::Result<()> {
    let cfg = DensityConfig::default();
    for id in ["cesaro", "riesz:sqrt", "lambda:half", "lacunary:2", "scaled-cesaro:2", "column-spike"] {
        let a = SummabilityMatrix::from_id(id)?;
        let report = check_regularity(&a, 5_000, 1e-2, &cfg)?;
        println!("{report}\n");
    }
    Ok(())
}
