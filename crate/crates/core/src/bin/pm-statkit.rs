use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use pm_statkit::scenario::{exit_code, list_builtins, load_scenario, run_scenario, RunOptions, BUILTIN_SCENARIOS};

#[derive(Parser)]
#[command(name = "pm-statkit", version, about = "Statistical convergence diagnostics for PM-space scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files or builtin scenarios by name.
    Run {
        scenarios: Vec<String>,
        /// Run every builtin scenario as well.
        #[arg(long)]
        builtins: bool,
        /// Artifacts go to <out>/<scenario name>/.
        #[arg(long, env = "PM_STATKIT_OUT", default_value = "out")]
        out: PathBuf,
        #[arg(long, env = "PM_STATKIT_SEED")]
        seed: Option<u64>,
        /// Sequence length, overriding each file.
        #[arg(long, env = "PM_STATKIT_TRUNCATION")]
        truncation: Option<usize>,
        /// Scenarios run concurrently.
        #[arg(long, env = "PM_STATKIT_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Print every matrix, index set, scenario and diagnostic id.
    ListBuiltins,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { mut scenarios, builtins, out, seed, truncation, jobs } = cli.command else {
        print!("{}", list_builtins());
        return ExitCode::SUCCESS;
    };
    if builtins {
        scenarios.extend(BUILTIN_SCENARIOS.iter().map(|(n, _)| n.to_string()));
    }
    if scenarios.is_empty() {
        eprintln!("nothing to run; name scenario files or pass --builtins");
        return ExitCode::from(1);
    }
    let opts = RunOptions { seed, truncation };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let results: Vec<_> = pool.install(|| {
        scenarios
            .par_iter()
            .map(|arg| {
                let outcome = run_scenario(&load_scenario(arg)?, &opts)?;
                outcome.write_to(&out.join(&outcome.name))?;
                Ok(outcome)
            })
            .collect()
    });
    for (arg, r) in scenarios.iter().zip(&results) {
        match r {
            Ok(o) => println!("{:<13} {}", o.verdict.to_string(), o.name),
            Err(e) => eprintln!("ERROR         {arg}: {e}"),
        }
    }
    ExitCode::from(exit_code(&results) as u8)
}
