//! Scenario runner for the `coherence-cost` library.
//!
//! A scenario names a construction with its parameters, an `ε` grid and a
//! list of checks. Running it writes a verdict summary, a bound CSV and a
//! channel record.

pub mod error;
pub mod record;
pub mod registry;
pub mod run;
pub mod scenario;

use std::fs;
use std::path::{Path, PathBuf};

pub use error::{CliError, Result};
pub use run::{run, sweep, Report, RunOptions};
pub use scenario::{Check, Scenario};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn load(path: &Path) -> Result<Scenario> {
    Scenario::parse(&fs::read_to_string(path).map_err(io_err(path))?)
}

/// Paths written by [`run_file`].
#[derive(Clone, Debug)]
pub struct Outputs {
    pub summary: PathBuf,
    pub csv: PathBuf,
    pub channel: PathBuf,
}

/// Runs a scenario file and writes `<name>.summary.txt`, `<name>.bounds.csv`
/// and `<name>.channel.txt` into `out_dir`.
pub fn run_file(path: &Path, out_dir: &Path, options: &RunOptions) -> Result<(Report, Outputs)> {
    let scenario = load(path)?;
    let report = run(&scenario, options)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let name = &scenario.name;
    let outputs = Outputs {
        summary: out_dir.join(format!("{name}.summary.txt")),
        csv: out_dir.join(format!("{name}.bounds.csv")),
        channel: out_dir.join(format!("{name}.channel.txt")),
    };
    fs::write(&outputs.summary, report.summary()).map_err(io_err(&outputs.summary))?;
    fs::write(&outputs.csv, report.csv()).map_err(io_err(&outputs.csv))?;
    fs::write(&outputs.channel, record::write_channel(&report.built.result.channel)).map_err(io_err(&outputs.channel))?;
    Ok((report, outputs))
}
