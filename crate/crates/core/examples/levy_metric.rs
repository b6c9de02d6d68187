//! Lévy distances between distribution functions.
//!
//! cargo run --example levy_metric

use pm_statkit::{distance_to_eps0, levy_distance, Ddf};

fn main() -> pm_statkit::Result<()> {
    let near = Ddf::unit_step(0.1)?;
    let far = Ddf::unit_step(3.0)?;
    let ramp = Ddf::ramp(0.5)?;
    let half = Ddf::step(&[(0.2, 0.5), (1.0, 1.0)])?;

    for (name, f) in [("H_0.1", &near), ("H_3", &far), ("ramp 0.5", &ramp), ("two jumps", &half)] {
        println!("d_L({name}, ε_0) = {:.6}", distance_to_eps0(f));
    }
    let d = levy_distance(&ramp, &half, 1e-12)?;
    println!("d_L(ramp, two jumps) = {:.6} (± {:.0e})", d.value, d.tolerance);
    println!("F(0.3) for the ramp: {:.3}", ramp.eval(0.3));
    Ok(())
}
