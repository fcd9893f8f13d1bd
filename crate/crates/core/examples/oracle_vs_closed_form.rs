//! Exact diagonalization on a truncated Fock basis against the closed forms.
//!
//!     cargo run --release --example oracle_vs_closed_form

use rlc_thermo::oracle::{LadderSettings, Observable, OraclePoint};
use rlc_thermo::{closed_forms, CircuitParams};

fn main() -> rlc_thermo::Result<()> {
    let tracked = [
        Observable::InternalEnergy,
        Observable::Entropy,
        Observable::Fluctuation,
        Observable::ResistorEnergy,
    ];
    for (r, beta) in [(0.0, 1.0), (0.5, 1.0), (0.5, 0.2), (0.9, 3.0)] {
        let p = CircuitParams::new(1.0, 1.0, r)?;
        let oracle = OraclePoint::converge(&p, beta, &tracked, 1e-8, &LadderSettings::default())?;
        println!(
            "R = {r}, beta = {beta}: N = {}, tail mass {:.1e}",
            oracle.dim(),
            oracle.report().tail_mass
        );
        for (o, exact) in [
            (
                Observable::InternalEnergy,
                closed_forms::internal_energy(&p, beta)?,
            ),
            (Observable::Entropy, closed_forms::entropy(&p, beta)?),
            (
                Observable::Fluctuation,
                closed_forms::fluctuation(&p, beta)?,
            ),
            (
                Observable::ResistorEnergy,
                closed_forms::resistor_energy(&p, beta)?,
            ),
        ] {
            let v = oracle.value(o)?;
            println!(
                "  {:<16} {v:>14.10} {exact:>14.10}  {:.1e}",
                o.name(),
                (v - exact).abs()
            );
        }
    }

    // the lowest levels sit on hbar omega (n + 1/2)
    let p = CircuitParams::new(1.0, 1.0, 0.5)?;
    let w = closed_forms::omega(&p)?.omega;
    let e = OraclePoint::at_dim(&p, 1.0, 256)?
        .spectrum()
        .eigenvalues()
        .to_vec();
    for (n, en) in e.iter().take(5).enumerate() {
        println!(
            "E_{n} = {en:.12}  (n + 1/2) omega = {:.12}",
            w * (n as f64 + 0.5)
        );
    }
    Ok(())
}
