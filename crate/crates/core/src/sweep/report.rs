//! Serialization of run results: a JSON envelope carrying the tool version
//! and the config hash, and CSV tables with fixed numeric formatting.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::suite::SuiteOutput;
use super::table::{sweep_header, ConvergenceRun, EntropyRow, SweepRow, ENTROPY_HEADER};
use crate::check::CheckResult;
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool_version: String,
    pub config_hash: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(config_hash: String, body: T) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_owned(),
            config_hash,
            body,
        }
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self).map_err(|e| Error::Io(e.into()))?;
        writeln!(out)?;
        Ok(())
    }
}

/// Rows of a sweep, as they appear in the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rows<T> {
    pub rows: Vec<T>,
}

/// Scientific notation with 17 significant digits, which round-trips any
/// `f64` exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn write_csv<W: Write, I>(out: W, header: &[String], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header).map_err(csv_error)?;
    for row in rows {
        writer.write_record(&row).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_entropy_csv<W: Write>(out: W, rows: &[EntropyRow]) -> Result<()> {
    let header: Vec<String> = ENTROPY_HEADER.iter().map(|s| s.to_string()).collect();
    write_csv(
        out,
        &header,
        rows.iter().map(|r| {
            vec![
                r.index.to_string(),
                format_float(r.inductance),
                format_float(r.capacitance),
                format_float(r.resistance),
                format_float(r.beta),
                format_float(r.omega),
                format_float(r.entropy),
                opt_float(r.entropy_oracle),
                format_float(r.entropy_slope),
                opt(r.converged),
                opt(r.n_used),
            ]
        }),
    )
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let observables: Vec<_> = rows
        .first()
        .map(|r| r.values.iter().map(|v| v.observable).collect())
        .unwrap_or_default();
    write_csv(
        out,
        &sweep_header(&observables),
        rows.iter().map(|r| {
            let mut line = vec![
                r.index.to_string(),
                format_float(r.inductance),
                format_float(r.capacitance),
                format_float(r.resistance),
                format_float(r.beta),
            ];
            for v in &r.values {
                line.push(format_float(v.closed_form));
                line.push(opt_float(v.oracle));
            }
            line.push(opt(r.converged));
            line.push(opt(r.n_used));
            line
        }),
    )
}

pub const CHECK_HEADER: [&str; 16] = [
    "name",
    "grid_index",
    "L",
    "C",
    "R",
    "beta",
    "parameter",
    "level",
    "N_used",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "pass",
    "inconclusive",
];

pub fn write_checks_csv<W: Write>(out: W, checks: &[CheckResult]) -> Result<()> {
    let header: Vec<String> = CHECK_HEADER.iter().map(|s| s.to_string()).collect();
    write_csv(
        out,
        &header,
        checks.iter().map(|c| {
            let ctx = &c.context;
            vec![
                c.name.clone(),
                opt(ctx.grid_index),
                format_float(ctx.inductance),
                format_float(ctx.capacitance),
                format_float(ctx.resistance),
                opt_float(ctx.beta),
                opt(ctx.parameter.map(|p| p.symbol())),
                opt(ctx.level),
                opt(ctx.n_used),
                format_float(c.lhs),
                format_float(c.rhs),
                format_float(c.abs_residual),
                format_float(c.rel_residual),
                format_float(c.tolerance),
                c.pass.to_string(),
                ctx.inconclusive.clone().unwrap_or_default(),
            ]
        }),
    )
}

/// The ladder trace as a table: one row per truncation.
pub fn write_convergence_csv<W: Write>(out: W, run: &ConvergenceRun) -> Result<()> {
    let header: Vec<String> = ["N", "value", "tail_mass", "successive_change"]
        .map(String::from)
        .to_vec();
    write_csv(
        out,
        &header,
        run.report.trace.iter().map(|step| {
            vec![
                step.dim.to_string(),
                format_float(step.values[0]),
                format_float(step.tail_mass),
                opt_float(step.successive_change),
            ]
        }),
    )
}

/// Human-readable digest of a check run.
pub fn write_summary<W: Write>(mut out: W, output: &SuiteOutput) -> Result<()> {
    writeln!(
        out,
        "{:<40} {:>6} {:>6} {:>6} {:>6} {:>12}",
        "check", "total", "pass", "fail", "incl", "worst rel"
    )?;
    for f in output.summary() {
        writeln!(
            out,
            "{:<40} {:>6} {:>6} {:>6} {:>6} {:>12.3e}",
            f.name, f.total, f.passed, f.failed, f.inconclusive, f.worst_rel_residual
        )?;
    }
    writeln!(
        out,
        "{} checks, {} probes: {}",
        output.checks.len(),
        output.probes.len(),
        if output.all_pass() {
            "all passed"
        } else {
            "FAILURES"
        }
    )?;
    Ok(())
}
