use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use natlift_cli::{run_scenario, Format, Scenario};

#[derive(Parser)]
#[command(name = "natlift", version, about = "Verify natural lift Kähler structures on cotangent bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario file and print a report.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "text", value_parser = ["json", "text"])]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the sample count in the config.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { config, format, out, seed, samples } = cli.command;
    let mut scenario = match Scenario::load(&config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if let Some(samples) = samples {
        scenario.samples = samples;
    }
    let report = match run_scenario(&scenario) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format: Format = format.parse().expect("clap restricts the values");
    let bytes = report.emit(format);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &bytes) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    ExitCode::from(report.exit_code() as u8)
}
