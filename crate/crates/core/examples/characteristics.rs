//! Parameter sets joined by (L, C, R) -> (sL, C/s, sR) share omega and so
//! every thermodynamic function; the oracle confirms it, together with the
//! commutator identity and the spectrum checks.
//!
//!     cargo run --release --example characteristics

use rlc_thermo::verify::{
    characteristic_partner, check_characteristic_invariance, check_level_spacing,
    check_pure_state_levels, VerificationPoint, VerifierSettings,
};
use rlc_thermo::{closed_forms, CircuitParams};

fn main() -> rlc_thermo::Result<()> {
    let settings = VerifierSettings::default();
    let base = CircuitParams::new(1.0, 1.0, 0.6)?;
    let inv = closed_forms::characteristic_invariants(&base)?;
    println!("c1 = {}, c2 = {}", inv.c1, inv.c2);
    for s in [0.5, 2.0, 4.0] {
        let partner = characteristic_partner(&base, s)?;
        let check = check_characteristic_invariance(&base, &partner, 1.0, &settings, 1e-6)?;
        println!(
            "s = {s}: L = {}, C = {}, R = {}  U {:.12} vs {:.12}  {}",
            partner.inductance,
            partner.capacitance,
            partner.resistance,
            check.lhs,
            check.rhs,
            if check.pass { "ok" } else { "FAIL" }
        );
    }

    let point = VerificationPoint::converge(&base, 1.0, &settings)?;
    let comm = point.check_commutator_average(1e-6)?;
    println!("<[H, qp]> = {:.2e} (pass {})", comm.lhs, comm.pass);

    let spacing = check_level_spacing(&base, 512, 64, 1e-8)?;
    println!(
        "worst spacing over 64 levels at N = 512: {:.14} vs omega {:.14}",
        spacing.lhs, spacing.rhs
    );
    for c in check_pure_state_levels(
        &base,
        256,
        &[0, 1, 5],
        rlc_thermo::ParamTag::Resistance,
        1e-6,
    )? {
        println!(
            "level {:?}: dE/dR {:.10} vs <dH/dR> {:.10}",
            c.context.level, c.lhs, c.rhs
        );
    }
    Ok(())
}
