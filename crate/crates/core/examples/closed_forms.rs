//! Closed-form thermodynamics of the damped circuit at one temperature,
//! across the underdamped range of R.
//!
//!     cargo run --example closed_forms

use rlc_thermo::{closed_forms, CircuitParams};

fn main() -> rlc_thermo::Result<()> {
    let (l, c, beta) = (1.0, 1.0, 1.0);
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>11} {:>10} {:>10}",
        "R", "omega", "U", "(dH)^2", "resistor", "S", "dS/dR"
    );
    for r in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
        let p = CircuitParams::new(l, c, r)?;
        println!(
            "{r:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>11.6} {:>10.6} {:>10.6}",
            closed_forms::omega(&p)?.omega,
            closed_forms::internal_energy(&p, beta)?,
            closed_forms::fluctuation(&p, beta)?,
            closed_forms::resistor_energy(&p, beta)?,
            closed_forms::entropy(&p, beta)?,
            closed_forms::entropy_slope_resistance(&p, beta)?,
        );
    }
    Ok(())
}
