//! Entropy slopes along the coefficients of H = chi1 p^2 + chi2 q^2 +
//! chi3 (pq + qp), from the oracle and from the closed form.
//!
//!     cargo run --release --example linear_probe

use rlc_thermo::verify::{probe_linear_parameters, VerifierSettings};
use rlc_thermo::CircuitParams;

fn main() -> rlc_thermo::Result<()> {
    let settings = VerifierSettings::default();
    for (l, c, r, beta) in [
        (1.0, 1.0, 0.5, 1.0),
        (2.0, 0.5, 0.0, 0.3),
        (0.5, 2.0, 0.4, 5.0),
    ] {
        let p = CircuitParams::new(l, c, r)?;
        let probe = probe_linear_parameters(&p, beta, &settings)?;
        println!(
            "L = {l}, C = {c}, R = {r}, beta = {beta}, chi = {:.4?}",
            probe.chi
        );
        for i in 0..3 {
            println!(
                "  dS/dchi{} oracle {:>13.9} closed form {:>13.9}",
                i + 1,
                probe.oracle_slopes[i],
                probe.closed_form_slopes[i]
            );
        }
        println!(
            "  2L dS/dR = {:.9}  (dS/dR = {:.9})",
            probe.scaled_resistance_slope, probe.entropy_slope_resistance
        );
    }
    Ok(())
}
