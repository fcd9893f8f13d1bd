//! Grid drivers behind the `rlc-thermo` subcommands.

pub mod command;
pub mod config;
pub mod report;
pub mod suite;
pub mod table;

pub use command::{execute, Command, Format, Outcome, Overrides};
pub use config::{Config, Grid, SweepAxis, SweepObservable};
pub use report::{Report, Rows};
pub use suite::{check_grid, run_check_suite, FamilySummary, GridPoint, ProbeRecord, SuiteOutput};
pub use table::{
    run_convergence, run_entropy_sweep, run_observable_sweep, ConvergenceRun, EntropyRow, SweepRow,
};
