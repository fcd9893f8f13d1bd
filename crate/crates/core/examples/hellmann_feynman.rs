//! Ensemble Hellmann-Feynman identities at one point: finite differences of
//! the oracle against Gibbs averages of dH/dchi, for chi = L, C, R.
//!
//!     cargo run --release --example hellmann_feynman

use rlc_thermo::verify::{VerificationPoint, VerifierSettings};
use rlc_thermo::{CircuitParams, ParamTag};

fn main() -> rlc_thermo::Result<()> {
    let settings = VerifierSettings::default();
    let p = CircuitParams::new(2.0, 0.5, 1.2)?;
    let point = VerificationPoint::converge(&p, 0.7, &settings)?;
    println!("N = {}", point.oracle().dim());

    let tol = settings.tolerances.identity;
    for tag in ParamTag::ALL {
        for check in [
            point.check_ghft_ensemble(tag, tol)?,
            point.check_energy_weighted_average(tag, tol)?,
            point.check_ghft_beta_form(tag, tol)?,
        ] {
            println!(
                "{:<22} {}  {:>15.10} {:>15.10}  rel {:.1e}  {}",
                check.name,
                tag.symbol(),
                check.lhs,
                check.rhs,
                check.rel_residual,
                if check.pass { "ok" } else { "FAIL" }
            );
        }
    }

    let all = point.all_checks(&settings.tolerances)?;
    let failed = all.iter().filter(|c| !c.pass).count();
    println!("{} checks at this point, {failed} failed", all.len());
    Ok(())
}
