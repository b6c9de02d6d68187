//! Strong neighborhoods and vicinity parameters.
//!
//! cargo run --example vicinity

use pm_statkit::pmspace::PmSpace;
use pm_statkit::trifn::TriangleFunction;

fn main() -> pm_statkit::Result<()> {
    let space = PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min());
    let points: Vec<f64> = (0..40).map(|i| i as f64 * 0.05).collect();

    for t in [0.5, 0.1] {
        let inside: Vec<f64> =
            points.iter().copied().filter(|q| space.in_strong_neighborhood(&0.0, t, q).unwrap_or(false)).collect();
        println!("N_0({t}) ∩ grid has {} points, largest {:?}", inside.len(), inside.last());
    }
    for u in [0.5, 0.2, 0.05] {
        let alpha = space.find_vicinity_alpha(u, &points)?;
        println!("u = {u}: α = {alpha} keeps α-close chains inside the u-vicinity");
    }
    Ok(())
}
