//! Entropy against resistance up to the edge of critical damping, written as
//! CSV to stdout. The oracle column is filled in for a few rows.
//!
//!     cargo run --release --example entropy_curve > s_of_r.csv

use std::io;

use rlc_thermo::sweep::{execute, Command, Config, Format, Grid};

fn main() -> rlc_thermo::Result<()> {
    let mut config = Config::default();
    config.sweep_entropy.resistance = Grid::List(vec![
        0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999,
    ]);
    config.sweep_entropy.allow_near_critical = true;
    config.sweep_entropy.cross_check = true;
    config.validate()?;
    execute(
        Command::SweepEntropy,
        &config,
        Format::Csv,
        io::stdout().lock(),
    )?;
    Ok(())
}
