//! Runs a builtin scenario and writes its artifacts.
//!
//! cargo run --example scenario_run -- [name] [out-dir]

use std::path::PathBuf;

use pm_statkit::scenario::{load_scenario, run_scenario, RunOptions};

fn main() -> pm_statkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "squares_cesaro".to_string());
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("pm-statkit"));

    let file = load_scenario(&name)?;
    let outcome = run_scenario(&file, &RunOptions::default())?;
    print!("{}", outcome.report);
    outcome.write_to(&out.join(&outcome.name))?;
    println!("\nartifacts in {}", out.join(&outcome.name).display());
    Ok(())
}
