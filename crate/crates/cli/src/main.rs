use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coherence_cost_cli::{load, registry, run_file, sweep, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "cohcost", version, about = "Build and certify Gibbs-preserving channels from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for reports.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed overriding the scenario's own.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Absolute tolerance for the checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check in a scenario and write its reports.
    Run { file: PathBuf },
    /// Tabulate quantities while varying one numeric parameter or epsilon.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values; may be empty.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        values: String,
    },
    /// Print a construction's parameters.
    Describe { id: String },
}

fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().map_err(|_| CliError::Invalid(format!("sweep value '{v}' is not a number"))))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions { seed: cli.seed, tol: cli.tol };
    let result = match &cli.command {
        Command::Run { file } => run_file(file, &cli.out, &options).and_then(|(report, outputs)| {
            print!("{}", report.summary());
            println!("wrote {} and {}", outputs.summary.display(), outputs.csv.display());
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed { failed: report.failures(), total: report.outcomes.len() })
            }
        }),
        Command::Sweep { file, param, values } => parse_values(values)
            .and_then(|values| Ok((load(file)?, values)))
            .and_then(|(sc, values)| sweep(&sc, param, &values, &options)).map(|csv| {
            print!("{csv}");
        }),
        Command::Describe { id } => registry::describe(id).map(|text| print!("{text}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
