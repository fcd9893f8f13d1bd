//! Level-resolved checks at a fixed truncation.

use super::finite_diff::{finite_diff_vec, parameter_step};
use super::identities::{coordinates, require_stencil_point};
use crate::check::{CheckContext, CheckResult};
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::fock::QuadratureBasis;
use crate::oracle::{diagonalize, eigenvalues};
use crate::params::{CircuitParams, ParamTag};

fn context(params: &CircuitParams, dim: usize) -> CheckContext {
    CheckContext {
        inductance: params.inductance,
        capacitance: params.capacitance,
        resistance: params.resistance,
        ..CheckContext::default()
    }
    .n_used(dim)
}

/// Pure-state Hellmann-Feynman theorem, `dE_n/dχ = ⟨ψ_n|∂H/∂χ|ψ_n⟩`, for
/// several levels sharing one eigenvalue stencil.
///
/// Levels must sit in the lower quarter of the truncation. A check is
/// inconclusive when a neighbouring level is close enough that the stencil
/// could swap the two.
pub fn check_pure_state_levels(
    params: &CircuitParams,
    dim: usize,
    levels: &[usize],
    tag: ParamTag,
    tolerance: f64,
) -> Result<Vec<CheckResult>> {
    params.require_underdamped()?;
    if let Some(&level) = levels.iter().find(|&&n| n >= dim / 4) {
        return Err(Error::LevelOutOfRange { level, dim });
    }
    let basis = QuadratureBasis::new(params, dim)?;
    let spectrum = diagonalize(&basis.hamiltonian(params))?;
    let derivative = basis.parameter_derivative(params, tag);
    let diagonal = spectrum.diagonal_elements(&derivative)?;

    let x = params.get(tag);
    let h = parameter_step(x);
    let slopes = finite_diff_vec(
        |t| {
            let (l, c, r) = coordinates(params, tag, t);
            require_stencil_point(l, c, r)?;
            let e = eigenvalues(&basis.hamiltonian_at(l, c, r))?;
            Ok(levels.iter().map(|&n| e[n]).collect())
        },
        x,
        h,
    )?;

    // first-order motion of level k over one step is bounded by h‖∂H/∂χ v_k‖
    let a = derivative.entries();
    let v = spectrum.eigenvectors();
    let motion = |k: usize| -> f64 {
        (0..dim)
            .map(|i| {
                (0..dim)
                    .filter(|&j| a[(i, j)] != faer::c64::new(0.0, 0.0))
                    .map(|j| a[(i, j)] * v[(j, k)])
                    .sum::<faer::c64>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    };
    let e = spectrum.eigenvalues();
    Ok(levels
        .iter()
        .zip(&slopes)
        .map(|(&n, slope)| {
            let mut gap = e[n + 1] - e[n];
            if n > 0 {
                gap = gap.min(e[n] - e[n - 1]);
            }
            let bound = (n.saturating_sub(1)..=n + 1)
                .map(motion)
                .fold(0.0, f64::max);
            let mut ctx = context(params, dim).parameter(tag).level(n);
            if gap < 10.0 * h * bound {
                ctx = ctx.inconclusive(format!(
                    "level spacing {gap:e} too small to track eigenvalue {n} over step {h:e}"
                ));
            }
            CheckResult::compare("hf_pure_state", slope.value, diagonal[n], tolerance, ctx)
        })
        .collect())
}

/// Single-level form of [`check_pure_state_levels`].
pub fn check_pure_state(
    params: &CircuitParams,
    dim: usize,
    level: usize,
    tag: ParamTag,
    tolerance: f64,
) -> Result<CheckResult> {
    let mut out = check_pure_state_levels(params, dim, &[level], tag, tolerance)?;
    Ok(out.remove(0))
}

/// Worst deviation of the level spacing `E_{n+1} − E_n` from `hbar omega`
/// over `n < levels`, at truncation `dim`.
///
/// `lhs` is the offending spacing, `rhs` is `hbar omega` and `level` names
/// the `n` where the deviation peaks.
pub fn check_level_spacing(
    params: &CircuitParams,
    dim: usize,
    levels: usize,
    tolerance: f64,
) -> Result<CheckResult> {
    if levels + 1 > dim {
        return Err(Error::LevelOutOfRange { level: levels, dim });
    }
    let quantum = params.hbar * closed_forms::omega(params)?.omega;
    let basis = QuadratureBasis::new(params, dim)?;
    let e = eigenvalues(&basis.hamiltonian(params))?;
    let (worst, spacing) = (0..levels)
        .map(|n| (n, e[n + 1] - e[n]))
        .max_by(|a, b| (a.1 - quantum).abs().total_cmp(&(b.1 - quantum).abs()))
        .expect("at least one level");
    let ctx = context(params, dim).level(worst);
    Ok(CheckResult::with_scale(
        "spectrum_spacing",
        spacing,
        quantum,
        quantum,
        tolerance,
        ctx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_capacitance_slope() {
        // E_0 = 1/(2 sqrt(LC)) at R = 0, so dE_0/dC = -1/4 at L = C = 1
        let params = CircuitParams::new(1.0, 1.0, 0.0).unwrap();
        let c = check_pure_state(&params, 64, 0, ParamTag::Capacitance, 1e-6).unwrap();
        assert!(c.pass, "{c:?}");
        assert!((c.lhs + 0.25).abs() < 1e-8);
    }

    #[test]
    fn resistance_slope_vanishes_at_zero_resistance() {
        let params = CircuitParams::new(1.0, 1.0, 0.0).unwrap();
        let c = check_pure_state(&params, 64, 3, ParamTag::Resistance, 1e-6).unwrap();
        assert!(c.pass, "{c:?}");
        assert_eq!(c.lhs, 0.0);
    }

    #[test]
    fn damped_levels() {
        let params = CircuitParams::new(1.0, 1.0, 0.5).unwrap();
        for tag in ParamTag::ALL {
            let checks = check_pure_state_levels(&params, 128, &[0, 1, 5], tag, 1e-6).unwrap();
            assert_eq!(checks.len(), 3);
            for c in checks {
                assert!(c.pass, "{c:?}");
            }
        }
    }

    #[test]
    fn rejects_edge_levels() {
        let params = CircuitParams::new(1.0, 1.0, 0.2).unwrap();
        assert!(matches!(
            check_pure_state(&params, 32, 8, ParamTag::Inductance, 1e-6),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn spacing_at_moderate_damping() {
        let params = CircuitParams::new(1.0, 1.0, 0.3).unwrap();
        let c = check_level_spacing(&params, 256, 64, 1e-8).unwrap();
        assert!(c.pass, "{c:?}");
        let undamped = CircuitParams::new(2.0, 0.5, 0.0).unwrap();
        let c = check_level_spacing(&undamped, 256, 64, 1e-8).unwrap();
        assert!(c.abs_residual < 1e-12, "{c:?}");
        // the truncated q² and p² misplace the top level to about N/2, which
        // lands on n = 63 when N = 128
        let c = check_level_spacing(&undamped, 128, 64, 1e-8).unwrap();
        assert!(!c.pass);
        assert_eq!(c.context.level, Some(63));
    }
}
