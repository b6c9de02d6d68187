//! Triangle functions acting on distribution functions.
//!
//! cargo run --example triangle_functions

use pm_statkit::trifn::TriangleFunction;
use pm_statkit::Ddf;

fn main() -> pm_statkit::Result<()> {
    let f = Ddf::step(&[(0.25, 0.5), (1.0, 1.0)])?;
    let g = Ddf::step(&[(0.25, 0.6), (1.0, 1.0)])?;
    let samples = vec![f.clone(), g.clone(), Ddf::eps0(), Ddf::unit_step(1.5)?];

    for name in ["min", "product", "lukasiewicz"] {
        let tau = TriangleFunction::from_name(name)?;
        let h = tau.apply(&f, &g);
        let at: Vec<String> = [0.5, 0.8, 1.0, 1.6].iter().map(|&x| format!("{:.2}", h.eval(x))).collect();
        let report = tau.check_axioms(&samples, 1e-9)?;
        println!(
            "{:<16} τ(f, g) at 0.5, 0.8, 1.0, 1.6: [{}]  axioms hold: {}",
            tau.name(),
            at.join(", "),
            report.all_passed()
        );
    }
    Ok(())
}
