use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dforms_cli::commands::{self, Format};
use dforms_cli::verify::{run_verify, Suite, DEFAULT_NS, SUPPORTED_N};

/// Exact double-form algebra and curvature invariants.
#[derive(Parser)]
#[command(name = "dforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl invariants h_2q and Einstein tensors T_2q of a model.
    Invariants {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        max_q: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The (p,q)-curvature of a model on a coordinate plane.
    Pq {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Comma-separated 0-based coordinate indices, e.g. 0,2
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        plane: Vec<usize>,
    },
    /// Effective decomposition of a square double form.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Dimensions to check (default 4,5)
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    let out = match command {
        Command::Invariants { spec, max_q, format } => commands::invariants(&spec, max_q, format)?,
        Command::Pq { spec, p, q, plane } => commands::pq(&spec, p, q, &plane)?,
        Command::Decompose { input } => commands::decompose_file(&input)?,
        Command::Verify { suite, n, trials, seed } => {
            let ns = if n.is_empty() { DEFAULT_NS.to_vec() } else { n };
            if let Some(bad) = ns.iter().find(|n| !SUPPORTED_N.contains(n)) {
                anyhow::bail!(
                    "--n {bad} is outside the supported range {}..={}",
                    SUPPORTED_N.start(),
                    SUPPORTED_N.end()
                );
            }
            let outcome = run_verify(suite, &ns, trials, seed);
            print!("{}", dforms::io::to_json(&outcome));
            eprintln!(
                "{} checks, {} failures, {:.2?}",
                outcome.checks_run, outcome.failures, outcome.wall_time
            );
            return Ok(if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            });
        }
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}
