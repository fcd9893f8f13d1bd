//! Analytic thermodynamics of the underdamped circuit.
//!
//! The resistance only enters through the mode frequency
//! `omega = sqrt(1/(LC) - R²/L²)`, so every observable here is the thermal
//! harmonic-oscillator result at `omega`, plus the chain rule through
//! `∂omega/∂R = -R/(L² omega)` where a resistance derivative is involved.
//!
//! Expressions are written in the reduced frequency `x = beta hbar omega`.
//! Below [`SMALL_REDUCED`] they switch to series forms; above
//! [`LARGE_REDUCED`] to asymptotic ones that cannot overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::CircuitParams;

pub const SMALL_REDUCED: f64 = 1e-6;
pub const LARGE_REDUCED: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeFrequency {
    /// `1/sqrt(LC)`, the undamped frequency.
    pub omega0: f64,
    /// `sqrt(1/(LC) - R²/L²)`.
    pub omega: f64,
}

/// Constants of the characteristic curves of the internal-energy PDE.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicInvariants {
    /// `1/L - 1/C`.
    pub c1: f64,
    /// `R²/L² - 1/(LC)`, equal to `-omega²`.
    pub c2: f64,
}

pub fn omega(params: &CircuitParams) -> Result<ModeFrequency> {
    params.require_underdamped()?;
    Ok(ModeFrequency {
        omega0: 1.0 / (params.inductance * params.capacitance).sqrt(),
        omega: params.omega_squared().sqrt(),
    })
}

pub fn characteristic_invariants(params: &CircuitParams) -> Result<CharacteristicInvariants> {
    params.validate()?;
    let (l, c, r) = (params.inductance, params.capacitance, params.resistance);
    Ok(CharacteristicInvariants {
        c1: 1.0 / l - 1.0 / c,
        c2: r * r / (l * l) - 1.0 / (l * c),
    })
}

/// `(hbar sqrt(-y) / 2) coth(hbar beta sqrt(-y) / 2)`: the internal energy as
/// a function of the characteristic invariants. The first argument does not
/// enter.
pub fn characteristic_energy(_x: f64, y: f64, beta: f64, hbar: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(y.is_finite() && y < 0.0) {
        return Err(Error::InvalidParameter {
            name: "y",
            value: y,
            reason: "second characteristic invariant must be negative",
        });
    }
    let w = (-y).sqrt();
    Ok(0.5 * hbar * w * coth_half(beta * hbar * w))
}

/// Reduced frequency `beta hbar omega`.
pub fn reduced_frequency(params: &CircuitParams, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(beta * params.hbar * omega(params)?.omega)
}

/// `⟨H⟩ = (hbar omega / 2) coth(beta hbar omega / 2)`.
pub fn internal_energy(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    let w = omega(params)?.omega;
    Ok(0.5 * params.hbar * w * coth_half(x))
}

/// `(ΔH)² = (hbar omega / 2)² / sinh²(beta hbar omega / 2)`.
pub fn fluctuation(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    let half = 0.5 * params.hbar * omega(params)?.omega;
    Ok(half * half * inv_sinh_sq_half(x))
}

/// `⟨∂H/∂R⟩ = -hbar R / (2 omega L²) coth(beta hbar omega / 2)`.
pub fn dh_dr_average(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    let w = omega(params)?.omega;
    let (l, r) = (params.inductance, params.resistance);
    // `+ 0.0` turns the R = 0 result into +0 rather than -0
    Ok(-params.hbar * r / (2.0 * w * l * l) * coth_half(x) + 0.0)
}

/// Energy taken up by the resistive term, `(R/2L)⟨pq + qp⟩ = R ⟨∂H/∂R⟩`.
/// Never positive.
pub fn resistor_energy(params: &CircuitParams, beta: f64) -> Result<f64> {
    Ok(params.resistance * dh_dr_average(params, beta)? + 0.0)
}

/// `∂S/∂R = beta R hbar² / (4 T L²) / sinh²(beta hbar omega / 2)`, `T = 1/(k beta)`.
pub fn entropy_slope_resistance(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    let t = params.temperature(beta);
    let (l, r, hbar) = (params.inductance, params.resistance, params.hbar);
    Ok(beta * r * hbar * hbar / (4.0 * t * l * l) * inv_sinh_sq_half(x))
}

/// `S = -k ln(e^x - 1) + (1/T) hbar omega e^x / (e^x - 1)` with `x = beta hbar omega`.
pub fn entropy(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    Ok(params.boltzmann * reduced_entropy(x))
}

/// Single-oscillator `ln Z = -x/2 - ln(1 - e^{-x})`.
pub fn log_partition(params: &CircuitParams, beta: f64) -> Result<f64> {
    let x = reduced_frequency(params, beta)?;
    Ok(-0.5 * x - log_one_minus_exp(-x))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveBeta(beta))
    }
}

/// `coth(x/2)`.
fn coth_half(x: f64) -> f64 {
    if x < SMALL_REDUCED {
        coth_half_series(x)
    } else if x > LARGE_REDUCED {
        1.0
    } else {
        coth_half_exact(x)
    }
}

fn coth_half_exact(x: f64) -> f64 {
    1.0 / (0.5 * x).tanh()
}

fn coth_half_series(x: f64) -> f64 {
    2.0 / x + x / 6.0
}

/// `1/sinh²(x/2)`.
fn inv_sinh_sq_half(x: f64) -> f64 {
    if x < SMALL_REDUCED {
        inv_sinh_sq_half_series(x)
    } else if x > LARGE_REDUCED {
        4.0 * (-x).exp()
    } else {
        inv_sinh_sq_half_exact(x)
    }
}

fn inv_sinh_sq_half_exact(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    1.0 / (s * s)
}

fn inv_sinh_sq_half_series(x: f64) -> f64 {
    4.0 / (x * x) - 1.0 / 3.0
}

/// `S/k` as a function of `x`.
fn reduced_entropy(x: f64) -> f64 {
    if x < SMALL_REDUCED {
        reduced_entropy_series(x)
    } else if x > LARGE_REDUCED {
        (1.0 + x) * (-x).exp()
    } else {
        reduced_entropy_exact(x)
    }
}

fn reduced_entropy_exact(x: f64) -> f64 {
    x / x.exp_m1() - log_one_minus_exp(-x)
}

/// `ln(1 - e^{-x})` for `x > 0` without cancellation at either end.
fn log_one_minus_exp(neg_x: f64) -> f64 {
    if neg_x > -std::f64::consts::LN_2 {
        (-neg_x.exp_m1()).ln()
    } else {
        (-neg_x.exp()).ln_1p()
    }
}

fn reduced_entropy_series(x: f64) -> f64 {
    1.0 - x.ln() + x * x / 24.0
}
