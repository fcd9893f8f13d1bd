//! How the truncation ladder behaves: an easy point converges early, a hot
//! strongly damped one runs to the cap.
//!
//!     cargo run --release --example convergence_ladder

use rlc_thermo::oracle::{LadderSettings, Observable, OraclePoint};
use rlc_thermo::{closed_forms, CircuitParams};

fn trace(r: f64, beta: f64) -> rlc_thermo::Result<()> {
    let p = CircuitParams::new(1.0, 1.0, r)?;
    let oracle = OraclePoint::converge(
        &p,
        beta,
        &[Observable::InternalEnergy],
        1e-5,
        &LadderSettings::default(),
    )?;
    let report = oracle.report();
    println!(
        "R = {r}, beta = {beta}: converged {} at N = {} (closed form U = {:.8})",
        report.converged,
        report.n_used,
        closed_forms::internal_energy(&p, beta)?
    );
    for step in &report.trace {
        println!(
            "  N = {:>5}  U = {:.8}  tail {:.1e}",
            step.dim, step.values[0], step.tail_mass
        );
    }
    Ok(())
}

fn main() -> rlc_thermo::Result<()> {
    trace(0.3, 1.0)?;
    trace(0.9, 0.1)?;
    Ok(())
}
