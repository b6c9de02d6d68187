//! Metric-induced and simple PM spaces on the reals, checked against the
//! PM-space axioms.
//!
//! cargo run --example pm_space_axioms

use pm_statkit::pmspace::PmSpace;
use pm_statkit::trifn::TriangleFunction;
use pm_statkit::Ddf;

fn main() -> pm_statkit::Result<()> {
    let points: Vec<f64> = vec![-1.0, 0.0, 0.25, 1.0, 2.5];
    let induced = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min());
    let simple =
        PmSpace::simple("reals/ramp", |a: &f64, b: &f64| (a - b).abs(), Ddf::ramp(1.0)?, TriangleFunction::min())?;

    for space in [&induced, &simple] {
        let report = space.verify_axioms(&points, 1e-9)?;
        println!("{} under {}:", space.label(), report.tau);
        for c in report.checks() {
            println!("  {:<36} {} checks, {} violations", c.axiom, c.checked, c.violations);
        }
        println!("  F(0, 1)(1.5) = {:.3}", space.distance(&0.0, &1.0).eval(1.5));
    }
    Ok(())
}
