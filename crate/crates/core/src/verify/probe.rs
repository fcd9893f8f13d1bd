//! Entropy slopes along the linear coefficients of the Hamiltonian,
//! `H = χ₁ p² + χ₂ q² + χ₃ (pq + qp)` with `χ₁ = 1/(2L)`, `χ₂ = 1/(2C)`,
//! `χ₃ = R/(2L)`.
//!
//! Nothing here passes or fails; the numbers are reported for comparison.

use serde::{Deserialize, Serialize};

use super::finite_diff::{finite_diff, parameter_step};
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::oracle::{eigenvalues, Observable, OraclePoint, ThermalState};
use crate::params::{CircuitParams, ParamTag};

use super::identities::{VerificationPoint, VerifierSettings};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearParameterProbe {
    pub params: CircuitParams,
    pub beta: f64,
    pub chi: [f64; 3],
    /// `∂S/∂χᵢ` from the oracle, basis frozen at the centre.
    pub oracle_slopes: [f64; 3],
    /// `∂S/∂χᵢ` by differencing the closed-form entropy.
    pub closed_form_slopes: [f64; 3],
    /// Closed-form `∂S/∂R` at fixed `L`, `C`.
    pub entropy_slope_resistance: f64,
    /// `2L ∂S/∂R`, which equals `∂S/∂χ₃` at fixed `χ₁`, `χ₂`.
    pub scaled_resistance_slope: f64,
    pub n_used: usize,
    pub converged: bool,
}

/// `(χ₁, χ₂, χ₃)` for a parameter set.
pub fn linear_coefficients(params: &CircuitParams) -> [f64; 3] {
    let (l, c, r) = (params.inductance, params.capacitance, params.resistance);
    [0.5 / l, 0.5 / c, r / (2.0 * l)]
}

fn from_coefficients(chi: [f64; 3], template: &CircuitParams) -> Result<CircuitParams> {
    if !(chi[0] > 0.0 && chi[1] > 0.0) {
        return Err(Error::InvalidParameter {
            name: "chi",
            value: chi[0].min(chi[1]),
            reason: "kinetic and potential coefficients must be positive",
        });
    }
    // the spectrum sees χ₃ only through χ₃² (the sign flip is complex
    // conjugation), so stencils may cross χ₃ = 0
    CircuitParams::with_units(
        0.5 / chi[0],
        0.5 / chi[1],
        chi[2].abs() / chi[0],
        template.hbar,
        template.boltzmann,
    )
}

/// Direct probe: the oracle entropy is differenced along each `χᵢ` with the
/// basis frozen at the centre.
pub fn probe_linear_parameters(
    params: &CircuitParams,
    beta: f64,
    settings: &VerifierSettings,
) -> Result<LinearParameterProbe> {
    let oracle = OraclePoint::converge(
        params,
        beta,
        &[Observable::Entropy],
        settings.convergence_tolerance,
        &settings.ladder,
    )?;
    let chi = linear_coefficients(params);
    let basis = oracle.basis();
    let mut oracle_slopes = [0.0; 3];
    for (i, slope) in oracle_slopes.iter_mut().enumerate() {
        *slope = finite_diff(
            |t| {
                let c = replace(chi, i, t);
                from_coefficients(c, params)?.require_underdamped()?;
                let e = eigenvalues(&basis.quadratic_form(c[0], c[1], c[2]))?;
                Ok(ThermalState::from_energies(&e, beta, params.boltzmann)?.entropy())
            },
            chi[i],
            parameter_step(chi[i]),
        )?
        .value;
    }
    assemble(
        params,
        beta,
        oracle_slopes,
        oracle.dim(),
        oracle.is_converged(),
    )
}

impl LinearParameterProbe {
    /// Probe from the `(L, C, R)` entropy slopes a verification point already
    /// holds, mapped to `χ` by the chain rule:
    /// `∂χ₁ = −2L² ∂L − 2LR ∂R`, `∂χ₂ = −2C² ∂C`, `∂χ₃ = 2L ∂R`.
    pub fn from_point(point: &VerificationPoint) -> Result<Self> {
        let oracle = point.oracle();
        let p = oracle.params();
        let (l, c, r) = (p.inductance, p.capacitance, p.resistance);
        let d_l = point.parameter_slope(ParamTag::Inductance)?.entropy.value;
        let d_c = point.parameter_slope(ParamTag::Capacitance)?.entropy.value;
        let d_r = point.parameter_slope(ParamTag::Resistance)?.entropy.value;
        let slopes = [
            -2.0 * l * l * d_l - 2.0 * l * r * d_r,
            -2.0 * c * c * d_c,
            2.0 * l * d_r,
        ];
        assemble(
            p,
            oracle.beta(),
            slopes,
            oracle.dim(),
            oracle.is_converged(),
        )
    }
}

fn replace(chi: [f64; 3], i: usize, value: f64) -> [f64; 3] {
    let mut c = chi;
    c[i] = value;
    c
}

fn assemble(
    params: &CircuitParams,
    beta: f64,
    oracle_slopes: [f64; 3],
    n_used: usize,
    converged: bool,
) -> Result<LinearParameterProbe> {
    let chi = linear_coefficients(params);
    let mut closed_form_slopes = [0.0; 3];
    for (i, slope) in closed_form_slopes.iter_mut().enumerate() {
        *slope = finite_diff(
            |t| closed_forms::entropy(&from_coefficients(replace(chi, i, t), params)?, beta),
            chi[i],
            parameter_step(chi[i]),
        )?
        .value;
    }
    let slope = closed_forms::entropy_slope_resistance(params, beta)?;
    Ok(LinearParameterProbe {
        params: *params,
        beta,
        chi,
        oracle_slopes,
        closed_form_slopes,
        entropy_slope_resistance: slope,
        scaled_resistance_slope: 2.0 * params.inductance * slope,
        n_used,
        converged,
    })
}
