use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use drumhead_cli::{run_path, RunOptions};

#[derive(Parser)]
#[command(name = "drumhead", version, about = "Run drumhead experiment configs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment of a config and write results.csv
    Run {
        config: PathBuf,
        /// Output directory
        #[arg(long, env = "DRUMHEAD_OUT", default_value = "out")]
        out: PathBuf,
        /// Experiments run in parallel
        #[arg(long)]
        jobs: Option<usize>,
        /// Use diam/64 grids everywhere
        #[arg(long)]
        fast: bool,
        /// Record wall-clock seconds per experiment
        #[arg(long)]
        timings: bool,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out, jobs, fast, timings } => {
            let opts = RunOptions { out, jobs, fast, timings };
            let summary = run_path(&config, &opts)?;
            let failed: Vec<_> = summary.rows.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                eprintln!("FAIL {} {} = {}", r.name, r.metric, r.value);
            }
            println!(
                "{} rows, {} failed; results in {}",
                summary.rows.len(),
                failed.len(),
                opts.out.join("results.csv").display()
            );
            Ok(failed.is_empty())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
