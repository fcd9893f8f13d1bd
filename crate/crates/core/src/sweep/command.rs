//! Subcommand dispatch shared by the binary and the tests.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::Config;
use super::report::{
    write_checks_csv, write_convergence_csv, write_entropy_csv, write_summary, write_sweep_csv,
    Report, Rows,
};
use super::suite::run_check_suite;
use super::table::{run_convergence, run_entropy_sweep, run_observable_sweep};
use crate::error::{Error, Result};
use crate::verify::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    Check,
    SweepEntropy,
    Sweep,
    Convergence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

impl Command {
    /// Tables default to CSV, reports to JSON.
    pub fn default_format(self) -> Format {
        match self {
            Command::SweepEntropy | Command::Sweep => Format::Csv,
            Command::Check | Command::Convergence => Format::Json,
        }
    }
}

/// Flag values layered over the config file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub cross_check: Option<bool>,
    /// Every check tolerance for `check`; the ladder tolerance otherwise.
    pub tolerance: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, command: Command, config: &mut Config) -> Result<()> {
        if let Some(on) = self.cross_check {
            config.sweep_entropy.cross_check = on;
            config.sweep.cross_check = on;
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Config(format!(
                    "tolerance must be finite and >= 0, got {t}"
                )));
            }
            match command {
                Command::Check => {
                    config.check.tolerances = Tolerances::uniform(t);
                    config.check.spectrum_tolerance = t;
                }
                _ => {
                    if t == 0.0 {
                        return Err(Error::Config("ladder tolerance must be positive".into()));
                    }
                    config.oracle.convergence_tolerance = t;
                }
            }
        }
        config.validate()
    }
}

/// What a run produced besides its output stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// False only when `check` found a failing or inconclusive check.
    pub passed: bool,
    pub summary: Option<String>,
}

/// Runs `command` and writes its table or report to `out`.
pub fn execute<W: Write>(
    command: Command,
    config: &Config,
    format: Format,
    out: W,
) -> Result<Outcome> {
    let hash = config.hash();
    match command {
        Command::Check => {
            let suite = run_check_suite(config)?;
            match format {
                Format::Json => Report::new(hash, &suite).write_json(out)?,
                Format::Csv => write_checks_csv(out, &suite.checks)?,
            }
            let mut summary = Vec::new();
            write_summary(&mut summary, &suite)?;
            Ok(Outcome {
                passed: suite.all_pass(),
                summary: Some(String::from_utf8_lossy(&summary).into_owned()),
            })
        }
        Command::SweepEntropy => {
            let rows = run_entropy_sweep(config)?;
            match format {
                Format::Csv => write_entropy_csv(out, &rows)?,
                Format::Json => Report::new(hash, Rows { rows }).write_json(out)?,
            }
            Ok(Outcome {
                passed: true,
                summary: None,
            })
        }
        Command::Sweep => {
            let rows = run_observable_sweep(config)?;
            match format {
                Format::Csv => write_sweep_csv(out, &rows)?,
                Format::Json => Report::new(hash, Rows { rows }).write_json(out)?,
            }
            Ok(Outcome {
                passed: true,
                summary: None,
            })
        }
        Command::Convergence => {
            let run = run_convergence(config)?;
            let summary = format!(
                "{} at N = {}: converged = {}, tail mass {:e}\n",
                run.observable, run.report.n_used, run.report.converged, run.report.tail_mass
            );
            match format {
                Format::Json => Report::new(hash, &run).write_json(out)?,
                Format::Csv => write_convergence_csv(out, &run)?,
            }
            Ok(Outcome {
                passed: true,
                summary: Some(summary),
            })
        }
    }
}
