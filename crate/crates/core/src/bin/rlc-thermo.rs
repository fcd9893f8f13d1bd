use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rlc_thermo::sweep::{execute, Command, Config, Format, Overrides};

#[derive(Parser)]
#[command(
    version,
    about = "Quantized RLC circuit thermodynamics: closed forms against exact diagonalization"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// TOML config; omitted keys take the shipped defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Compute oracle columns next to the closed forms
    #[arg(long, global = true, value_enum)]
    cross_check: Option<Switch>,

    /// Check tolerance (check) or ladder tolerance (other subcommands)
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Accepted for scripts; every computation is deterministic anyway
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Run every identity and closed-form check over the check grid
    Check,
    /// Entropy against resistance
    SweepEntropy,
    /// Observables along one parameter axis
    Sweep,
    /// Truncation ladder trace at one point
    Convergence,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Switch {
    On,
    Off,
}

fn run(cli: &Cli) -> rlc_thermo::Result<bool> {
    let command = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::SweepEntropy => Command::SweepEntropy,
        Cmd::Sweep => Command::Sweep,
        Cmd::Convergence => Command::Convergence,
    };
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    Overrides {
        cross_check: cli.cross_check.map(|s| matches!(s, Switch::On)),
        tolerance: cli.tolerance,
    }
    .apply(command, &mut config)?;
    let format = match cli.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => command.default_format(),
    };

    let outcome = match &cli.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            let outcome = execute(command, &config, format, &mut file)?;
            file.flush()?;
            if let Some(summary) = &outcome.summary {
                print!("{summary}");
            }
            outcome
        }
        None => {
            let stdout = io::stdout();
            let outcome = execute(command, &config, format, stdout.lock())?;
            if let Some(summary) = &outcome.summary {
                eprint!("{summary}");
            }
            outcome
        }
    };
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
