//! Ensemble Hellmann-Feynman identities, checked against the oracle.
//!
//! All parameter derivatives are taken with the quadrature matrices frozen at
//! the centre point, so the finite differences see `H(L, C, R)` as a family of
//! matrices on one fixed basis. Derivatives with respect to `beta` reuse the
//! centre spectrum.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::finite_diff::{
    beta_step, finite_diff, finite_diff_many, parameter_step, DerivativeEstimate,
};
use crate::check::{CheckContext, CheckResult};
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::oracle::{
    eigenvalues, thermo_identities, LadderSettings, Observable, OraclePoint, ThermalState,
};
use crate::params::{omega_squared, CircuitParams, ParamTag};

/// Pass thresholds for each family of checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Ensemble identities, fluctuation and entropy-variation checks.
    pub identity: f64,
    pub pde: f64,
    pub characteristic: f64,
    /// Relative to the magnitude of the bracket's terms.
    pub commutator: f64,
    pub pure_state: f64,
    /// Oracle value against closed form.
    pub closed_form: f64,
    /// Oracle finite difference against closed form.
    pub closed_form_derivative: f64,
    pub thermodynamic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-5,
            pde: 1e-4,
            characteristic: 1e-6,
            commutator: 1e-6,
            pure_state: 1e-6,
            closed_form: 1e-6,
            closed_form_derivative: 1e-5,
            thermodynamic: 1e-10,
        }
    }
}

impl Tolerances {
    /// Every family at the same threshold.
    pub fn uniform(tolerance: f64) -> Self {
        Self {
            identity: tolerance,
            pde: tolerance,
            characteristic: tolerance,
            commutator: tolerance,
            pure_state: tolerance,
            closed_form: tolerance,
            closed_form_derivative: tolerance,
            thermodynamic: tolerance,
        }
    }
}

/// How the oracle behind each check is converged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierSettings {
    pub ladder: LadderSettings,
    pub convergence_tolerance: f64,
    pub tolerances: Tolerances,
}

impl Default for VerifierSettings {
    fn default() -> Self {
        Self {
            ladder: LadderSettings::default(),
            convergence_tolerance: 1e-5,
            tolerances: Tolerances::default(),
        }
    }
}

/// Observables the ladder must converge before checks are trusted.
pub const CHECK_OBSERVABLES: [Observable; 2] = [Observable::InternalEnergy, Observable::Entropy];

/// Finite-difference slopes of `⟨H⟩` and `S` along one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSlope {
    pub energy: DerivativeEstimate,
    pub entropy: DerivativeEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyForm {
    /// `∂S/∂χ = (1/T)(∂⟨H⟩/∂χ − ⟨∂H/∂χ⟩)`.
    EnergyDifference,
    /// `T ∂S/∂χ = beta ∂⟨∂H/∂χ⟩/∂beta`.
    BetaDerivative,
}

/// Coordinates `(L, C, R)` with one of them replaced.
pub(crate) fn coordinates(params: &CircuitParams, tag: ParamTag, value: f64) -> (f64, f64, f64) {
    let (mut l, mut c, mut r) = (params.inductance, params.capacitance, params.resistance);
    match tag {
        ParamTag::Inductance => l = value,
        ParamTag::Capacitance => c = value,
        ParamTag::Resistance => r = value,
    }
    (l, c, r)
}

pub(crate) fn require_stencil_point(l: f64, c: f64, r: f64) -> Result<()> {
    if !(l > 0.0 && c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "stencil",
            value: l.min(c),
            reason: "L and C must stay positive",
        });
    }
    if omega_squared(l, c, r) <= 0.0 {
        return Err(Error::Overdamped {
            resistance: r,
            critical: (l / c).sqrt(),
        });
    }
    Ok(())
}

/// A converged oracle point plus lazily computed derivative data.
#[derive(Debug)]
pub struct VerificationPoint {
    oracle: OraclePoint,
    diagonals: [OnceLock<Vec<f64>>; 3],
    slopes: [OnceLock<ParameterSlope>; 3],
}

impl VerificationPoint {
    pub fn new(oracle: OraclePoint) -> Self {
        Self {
            oracle,
            diagonals: Default::default(),
            slopes: Default::default(),
        }
    }

    pub fn converge(
        params: &CircuitParams,
        beta: f64,
        settings: &VerifierSettings,
    ) -> Result<Self> {
        let oracle = OraclePoint::converge(
            params,
            beta,
            &CHECK_OBSERVABLES,
            settings.convergence_tolerance,
            &settings.ladder,
        )?;
        Ok(Self::new(oracle))
    }

    pub fn oracle(&self) -> &OraclePoint {
        &self.oracle
    }

    fn params(&self) -> &CircuitParams {
        self.oracle.params()
    }

    fn beta(&self) -> f64 {
        self.oracle.beta()
    }

    fn state(&self) -> &ThermalState {
        self.oracle.state()
    }

    fn context(&self, tag: Option<ParamTag>) -> CheckContext {
        let mut ctx = CheckContext::new(self.params(), self.beta()).n_used(self.oracle.dim());
        ctx.parameter = tag;
        if !self.oracle.is_converged() {
            ctx = ctx.inconclusive(format!(
                "truncation ladder not converged at N = {}",
                self.oracle.dim()
            ));
        }
        ctx
    }

    /// `⟨v_n|∂H/∂χ|v_n⟩` for every eigenvector.
    pub fn derivative_diagonal(&self, tag: ParamTag) -> Result<&[f64]> {
        let cell = &self.diagonals[tag as usize];
        if let Some(d) = cell.get() {
            return Ok(d);
        }
        let op = self.oracle.basis().parameter_derivative(self.params(), tag);
        let d = self.oracle.spectrum().diagonal_elements(&op)?;
        Ok(cell.get_or_init(|| d))
    }

    /// `⟨∂H/∂χ⟩` at inverse temperature `beta`.
    fn derivative_average_at(&self, tag: ParamTag, beta: f64) -> Result<f64> {
        let d = self.derivative_diagonal(tag)?;
        Ok(self.oracle.state_at(beta)?.average(d))
    }

    fn stencil_state(&self, tag: ParamTag, value: f64) -> Result<ThermalState> {
        let (l, c, r) = coordinates(self.params(), tag, value);
        require_stencil_point(l, c, r)?;
        let energies = eigenvalues(&self.oracle.basis().hamiltonian_at(l, c, r))?;
        ThermalState::from_energies(&energies, self.beta(), self.params().boltzmann)
    }

    /// `∂⟨H⟩/∂χ` and `∂S/∂χ` from one shared stencil.
    pub fn parameter_slope(&self, tag: ParamTag) -> Result<&ParameterSlope> {
        let cell = &self.slopes[tag as usize];
        if let Some(s) = cell.get() {
            return Ok(s);
        }
        let x = self.params().get(tag);
        let [energy, entropy] = finite_diff_many(
            |t| {
                let state = self.stencil_state(tag, t)?;
                Ok([state.internal_energy(), state.entropy()])
            },
            x,
            parameter_step(x),
        )?;
        Ok(cell.get_or_init(|| ParameterSlope { energy, entropy }))
    }

    /// Derivative over `beta` of a function of the Gibbs state, on the
    /// centre spectrum.
    pub fn beta_slope<F>(&self, f: F) -> Result<DerivativeEstimate>
    where
        F: Fn(&ThermalState) -> Result<f64>,
    {
        let beta = self.beta();
        finite_diff(|b| f(&self.oracle.state_at(b)?), beta, beta_step(beta))
    }

    fn derivative_beta_slope(&self, tag: ParamTag) -> Result<DerivativeEstimate> {
        let d = self.derivative_diagonal(tag)?;
        self.beta_slope(|s| Ok(s.average(d)))
    }

    /// `∂⟨H⟩/∂χ = ⟨(1 + beta⟨H⟩ − beta H) ∂H/∂χ⟩`.
    pub fn check_ghft_ensemble(&self, tag: ParamTag, tolerance: f64) -> Result<CheckResult> {
        let lhs = self.parameter_slope(tag)?.energy.value;
        let d = self.derivative_diagonal(tag)?;
        let state = self.state();
        let (beta, u) = (self.beta(), state.internal_energy());
        let weights: Vec<f64> = self
            .oracle
            .spectrum()
            .eigenvalues()
            .iter()
            .zip(d)
            .map(|(e, dn)| (1.0 + beta * u - beta * e) * dn)
            .collect();
        let rhs = state.average(&weights);
        Ok(CheckResult::compare(
            "ghft_ensemble",
            lhs,
            rhs,
            tolerance,
            self.context(Some(tag)),
        ))
    }

    /// `⟨H ∂H/∂χ⟩ = −∂⟨∂H/∂χ⟩/∂beta + ⟨∂H/∂χ⟩⟨H⟩`, with the product
    /// evaluated as `Σ p_n E_n ⟨v_n|∂H/∂χ|v_n⟩`.
    pub fn check_energy_weighted_average(
        &self,
        tag: ParamTag,
        tolerance: f64,
    ) -> Result<CheckResult> {
        let d = self.derivative_diagonal(tag)?;
        let state = self.state();
        let weighted: Vec<f64> = self
            .oracle
            .spectrum()
            .eigenvalues()
            .iter()
            .zip(d)
            .map(|(e, dn)| e * dn)
            .collect();
        let lhs = state.average(&weighted);
        let slope = self.derivative_beta_slope(tag)?.value;
        let rhs = -slope + state.average(d) * state.internal_energy();
        Ok(CheckResult::compare(
            "ghft_energy_weighted",
            lhs,
            rhs,
            tolerance,
            self.context(Some(tag)),
        ))
    }

    /// `∂⟨H⟩/∂χ = (1 + beta ∂/∂beta)⟨∂H/∂χ⟩`.
    pub fn check_ghft_beta_form(&self, tag: ParamTag, tolerance: f64) -> Result<CheckResult> {
        let lhs = self.parameter_slope(tag)?.energy.value;
        let average = self.derivative_average_at(tag, self.beta())?;
        let rhs = average + self.beta() * self.derivative_beta_slope(tag)?.value;
        Ok(CheckResult::compare(
            "ghft_beta_form",
            lhs,
            rhs,
            tolerance,
            self.context(Some(tag)),
        ))
    }

    /// `⟨H²⟩ − ⟨H⟩² = −∂⟨H⟩/∂beta`.
    pub fn check_fluctuation(&self, tolerance: f64) -> Result<CheckResult> {
        let lhs = self.state().fluctuation();
        let rhs = -self.beta_slope(|s| Ok(s.internal_energy()))?.value;
        Ok(CheckResult::compare(
            "fluctuation_beta_derivative",
            lhs,
            rhs,
            tolerance,
            self.context(None),
        ))
    }

    pub fn check_entropy_variation(
        &self,
        tag: ParamTag,
        form: EntropyForm,
        tolerance: f64,
    ) -> Result<CheckResult> {
        let slope = self.parameter_slope(tag)?;
        let temperature = self.state().temperature();
        let (name, lhs, rhs) = match form {
            EntropyForm::EnergyDifference => {
                let average = self.derivative_average_at(tag, self.beta())?;
                (
                    "entropy_variation_energy",
                    slope.entropy.value,
                    (slope.energy.value - average) / temperature,
                )
            }
            EntropyForm::BetaDerivative => (
                "entropy_variation_beta",
                temperature * slope.entropy.value,
                self.beta() * self.derivative_beta_slope(tag)?.value,
            ),
        };
        Ok(CheckResult::compare(
            name,
            lhs,
            rhs,
            tolerance,
            self.context(Some(tag)),
        ))
    }

    /// Oracle `∂S/∂R` against the closed-form entropy slope.
    pub fn check_entropy_slope_closed_form(&self, tolerance: f64) -> Result<CheckResult> {
        let lhs = self.parameter_slope(ParamTag::Resistance)?.entropy.value;
        let rhs = closed_forms::entropy_slope_resistance(self.params(), self.beta())?;
        Ok(CheckResult::compare(
            "entropy_slope_closed_form",
            lhs,
            rhs,
            tolerance,
            self.context(Some(ParamTag::Resistance)),
        ))
    }

    /// The internal-energy PDE multiplied through by `2R`:
    /// `2R(L² ∂_L + C² ∂_C)⟨H⟩ = −(2LR² − L²/C − L) ∂_R⟨H⟩`.
    pub fn check_pde_residual(&self, tolerance: f64) -> Result<CheckResult> {
        let p = *self.params();
        let (l, c, r) = (p.inductance, p.capacitance, p.resistance);
        let d_l = self.parameter_slope(ParamTag::Inductance)?.energy.value;
        let d_c = self.parameter_slope(ParamTag::Capacitance)?.energy.value;
        let d_r = self.parameter_slope(ParamTag::Resistance)?.energy.value;
        let lhs = 2.0 * r * (l * l * d_l + c * c * d_c);
        let rhs = -(2.0 * l * r * r - l * l / c - l) * d_r;
        Ok(CheckResult::compare(
            "pde_residual",
            lhs,
            rhs,
            tolerance,
            self.context(None),
        ))
    }

    /// `⟨(1 + beta⟨H⟩ − beta H)[(1/L + 1/C)(pq + qp) + (2R/L)(p² + q²)]⟩ = 0`,
    /// measured against the summed magnitude of the two bracket terms.
    pub fn check_commutator_average(&self, tolerance: f64) -> Result<CheckResult> {
        let p = *self.params();
        let basis = self.oracle.basis();
        let spectrum = self.oracle.spectrum();
        let sym = spectrum.diagonal_elements(basis.symmetrized_product())?;
        let p2 = spectrum.diagonal_elements(basis.p_squared())?;
        let q2 = spectrum.diagonal_elements(basis.q_squared())?;
        let (beta, u) = (self.beta(), self.state().internal_energy());
        let mixing = 2.0 * p.resistance / p.inductance;
        let cross = 1.0 / p.inductance + 1.0 / p.capacitance;

        let mut total = 0.0;
        let mut scale = 0.0;
        for (n, (&prob, &e)) in self
            .state()
            .probabilities()
            .iter()
            .zip(spectrum.eigenvalues())
            .enumerate()
        {
            let w = 1.0 + beta * u - beta * e;
            let t1 = cross * sym[n];
            let t2 = mixing * (p2[n] + q2[n]);
            total += prob * w * (t1 + t2);
            scale += prob * w.abs() * (t1.abs() + t2.abs());
        }
        Ok(CheckResult::with_scale(
            "commutator_average",
            total,
            0.0,
            scale,
            tolerance,
            self.context(None),
        ))
    }

    /// The resistor term `(R/2L)⟨pq + qp⟩` must be strictly negative for
    /// `R > 0` and exactly zero at `R = 0`. `lhs` is the oracle value.
    pub fn check_dissipation_sign(&self) -> Result<CheckResult> {
        let value = self.oracle.value(Observable::ResistorEnergy)?;
        let mut check = CheckResult::with_scale(
            "dissipation_sign",
            value,
            0.0,
            value.abs(),
            0.0,
            self.context(None),
        );
        let sign_ok = if self.params().resistance > 0.0 {
            value < 0.0
        } else {
            value == 0.0
        };
        check.pass = sign_ok && !check.is_inconclusive();
        Ok(check)
    }

    /// Free-energy and entropy identities on the centre Gibbs state.
    pub fn thermodynamic_checks(&self, tolerance: f64) -> Vec<CheckResult> {
        let (free, entropy) = thermo_identities(self.state(), self.oracle.spectrum());
        [free, entropy]
            .into_iter()
            .map(|mut c| {
                c.context = self.context(None);
                c.retolerate(tolerance)
            })
            .collect()
    }

    /// Oracle observables against their closed forms.
    pub fn closed_form_checks(&self, tolerances: &Tolerances) -> Result<Vec<CheckResult>> {
        let p = self.params();
        let beta = self.beta();
        let state = self.state();
        let ctx = self.context(None);
        let resistor = self.oracle.value(Observable::ResistorEnergy)?;
        let variance_slope = -self.beta_slope(|s| Ok(s.internal_energy()))?.value;
        Ok(vec![
            CheckResult::compare(
                "closed_form_internal_energy",
                state.internal_energy(),
                closed_forms::internal_energy(p, beta)?,
                tolerances.closed_form,
                ctx.clone(),
            ),
            CheckResult::compare(
                "closed_form_entropy",
                state.entropy(),
                closed_forms::entropy(p, beta)?,
                tolerances.closed_form,
                ctx.clone(),
            ),
            CheckResult::compare(
                "closed_form_fluctuation",
                state.fluctuation(),
                closed_forms::fluctuation(p, beta)?,
                tolerances.closed_form,
                ctx.clone(),
            ),
            CheckResult::compare(
                "closed_form_fluctuation_beta_derivative",
                variance_slope,
                closed_forms::fluctuation(p, beta)?,
                tolerances.closed_form_derivative,
                ctx.clone(),
            ),
            CheckResult::compare(
                "closed_form_resistor_energy",
                resistor,
                closed_forms::resistor_energy(p, beta)?,
                tolerances.closed_form,
                ctx,
            ),
        ])
    }

    /// Every per-point family in a fixed order.
    pub fn all_checks(&self, tolerances: &Tolerances) -> Result<Vec<CheckResult>> {
        let mut out = self.thermodynamic_checks(tolerances.thermodynamic);
        out.extend(self.closed_form_checks(tolerances)?);
        out.push(self.check_dissipation_sign()?);
        for tag in ParamTag::ALL {
            out.push(self.check_ghft_ensemble(tag, tolerances.identity)?);
            out.push(self.check_energy_weighted_average(tag, tolerances.identity)?);
            out.push(self.check_ghft_beta_form(tag, tolerances.identity)?);
            out.push(self.check_entropy_variation(
                tag,
                EntropyForm::EnergyDifference,
                tolerances.identity,
            )?);
            out.push(self.check_entropy_variation(
                tag,
                EntropyForm::BetaDerivative,
                tolerances.identity,
            )?);
        }
        out.push(self.check_fluctuation(tolerances.identity)?);
        out.push(self.check_entropy_slope_closed_form(tolerances.closed_form_derivative)?);
        if self.params().resistance > 0.0 {
            out.push(self.check_pde_residual(tolerances.pde)?);
        }
        out.push(self.check_commutator_average(tolerances.commutator)?);
        Ok(out)
    }
}

/// A second parameter set on the same characteristic (equal `c2`):
/// `(sL, C/s, sR)`.
pub fn characteristic_partner(params: &CircuitParams, scale: f64) -> Result<CircuitParams> {
    CircuitParams::with_units(
        params.inductance * scale,
        params.capacitance / scale,
        params.resistance * scale,
        params.hbar,
        params.boltzmann,
    )
}

/// Tolerance on the `c2` precondition of [`check_characteristic_invariance`].
pub const CHARACTERISTIC_MATCH: f64 = 1e-12;

/// Independent oracle runs at two parameter sets sharing `c2` must agree on
/// the internal energy.
pub fn check_characteristic_invariance(
    first: &CircuitParams,
    second: &CircuitParams,
    beta: f64,
    settings: &VerifierSettings,
    tolerance: f64,
) -> Result<CheckResult> {
    let c2_a = closed_forms::characteristic_invariants(first)?.c2;
    let c2_b = closed_forms::characteristic_invariants(second)?.c2;
    if (c2_a - c2_b).abs() >= CHARACTERISTIC_MATCH {
        return Err(Error::CharacteristicMismatch {
            first: c2_a,
            second: c2_b,
        });
    }
    let observables = [Observable::InternalEnergy];
    let a = OraclePoint::converge(
        first,
        beta,
        &observables,
        settings.convergence_tolerance,
        &settings.ladder,
    )?;
    let b = OraclePoint::converge(
        second,
        beta,
        &observables,
        settings.convergence_tolerance,
        &settings.ladder,
    )?;
    let mut ctx = CheckContext::new(first, beta).n_used(a.dim().max(b.dim()));
    if !(a.is_converged() && b.is_converged()) {
        ctx = ctx.inconclusive("truncation ladder not converged");
    }
    Ok(CheckResult::compare(
        "characteristic_invariance",
        a.state().internal_energy(),
        b.state().internal_energy(),
        tolerance,
        ctx,
    ))
}

macro_rules! point_check {
    ($(#[$doc:meta])* $name:ident => |$point:ident, $tol:ident $(, $arg:ident : $ty:ty)*| $body:expr) => {
        $(#[$doc])*
        pub fn $name(
            params: &CircuitParams,
            beta: f64,
            $($arg: $ty,)*
            settings: &VerifierSettings,
        ) -> Result<CheckResult> {
            let $point = VerificationPoint::converge(params, beta, settings)?;
            let $tol = &settings.tolerances;
            $body
        }
    };
}

point_check!(
    /// One-shot form of [`VerificationPoint::check_ghft_ensemble`].
    check_ghft_ensemble => |point, tol, tag: ParamTag| point.check_ghft_ensemble(tag, tol.identity)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_energy_weighted_average`].
    check_energy_weighted_average => |point, tol, tag: ParamTag| point.check_energy_weighted_average(tag, tol.identity)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_ghft_beta_form`].
    check_ghft_beta_form => |point, tol, tag: ParamTag| point.check_ghft_beta_form(tag, tol.identity)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_fluctuation`].
    check_fluctuation => |point, tol| point.check_fluctuation(tol.identity)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_entropy_variation`].
    check_entropy_variation => |point, tol, tag: ParamTag, form: EntropyForm| point.check_entropy_variation(tag, form, tol.identity)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_pde_residual`].
    check_pde_residual => |point, tol| point.check_pde_residual(tol.pde)
);
point_check!(
    /// One-shot form of [`VerificationPoint::check_commutator_average`].
    check_commutator_average => |point, tol| point.check_commutator_average(tol.commutator)
);

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> VerifierSettings {
        VerifierSettings::default()
    }

    fn point(l: f64, c: f64, r: f64, beta: f64) -> VerificationPoint {
        let params = CircuitParams::new(l, c, r).unwrap();
        VerificationPoint::converge(&params, beta, &settings()).unwrap()
    }

    #[test]
    fn resistance_checks_vanish_at_zero_resistance() {
        let pt = point(1.0, 1.0, 0.0, 1.0);
        let slope = pt.parameter_slope(ParamTag::Resistance).unwrap();
        assert_eq!(slope.energy.value, 0.0);
        assert_eq!(slope.entropy.value, 0.0);
        let c = pt.check_ghft_ensemble(ParamTag::Resistance, 1e-5).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.lhs.abs() < 1e-9 && c.rhs.abs() < 1e-9);
        for form in [EntropyForm::EnergyDifference, EntropyForm::BetaDerivative] {
            let c = pt
                .check_entropy_variation(ParamTag::Resistance, form, 1e-5)
                .unwrap();
            assert!(c.pass, "{c:?}");
        }
        let c = pt.check_ghft_beta_form(ParamTag::Resistance, 1e-5).unwrap();
        assert!(c.pass && c.lhs.abs() < 1e-9, "{c:?}");
    }

    #[test]
    fn ensemble_identity_matches_closed_form_slope() {
        let pt = point(1.0, 1.0, 0.5, 1.0);
        let c = pt.check_ghft_ensemble(ParamTag::Resistance, 1e-5).unwrap();
        assert!(c.pass, "{c:?}");
        // ∂R of (ω/2)coth(βω/2) with ω = sqrt(1 − R²), finite differences on the closed form
        let u = |r: f64| {
            closed_forms::internal_energy(&CircuitParams::new(1.0, 1.0, r).unwrap(), 1.0).unwrap()
        };
        let fd = finite_diff(|r| Ok(u(r)), 0.5, 1e-4).unwrap().value;
        assert!((c.lhs - fd).abs() / fd.abs() < 1e-6, "{} vs {fd}", c.lhs);
        assert!(fd < 0.0);
    }

    #[test]
    fn beta_forms_hold_away_from_symmetric_points() {
        let pt = point(1.0, 1.0, 0.3, 2.0);
        for tag in ParamTag::ALL {
            let c = pt.check_energy_weighted_average(tag, 1e-5).unwrap();
            assert!(c.pass, "{c:?}");
            let c = pt.check_ghft_beta_form(tag, 1e-5).unwrap();
            assert!(c.pass, "{c:?}");
        }
        let c = pt.check_fluctuation(1e-5).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn entropy_variation_matches_resistance_slope() {
        let pt = point(1.0, 1.0, 0.5, 1.0);
        let c = pt
            .check_entropy_variation(ParamTag::Resistance, EntropyForm::EnergyDifference, 1e-5)
            .unwrap();
        assert!(c.pass, "{c:?}");
        assert!((c.lhs - 0.626).abs() < 1e-3, "{}", c.lhs);
        let c = pt.check_entropy_slope_closed_form(1e-5).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn pde_and_commutator() {
        let pt = point(2.0, 0.5, 0.4, 0.7);
        let c = pt.check_pde_residual(1e-4).unwrap();
        assert!(c.pass, "{c:?}");
        let c = pt.check_commutator_average(1e-6).unwrap();
        assert!(c.pass, "{c:?}");
        let pt = point(1.0, 1.0, 0.0, 1.0);
        let c = pt.check_commutator_average(1e-6).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn dissipation_sign() {
        let c = point(1.0, 1.0, 0.0, 1.0).check_dissipation_sign().unwrap();
        assert!(c.pass && c.lhs == 0.0, "{c:?}");
        let c = point(1.0, 2.0, 0.2, 3.0).check_dissipation_sign().unwrap();
        assert!(c.pass && c.lhs < 0.0, "{c:?}");
    }

    #[test]
    fn characteristic_pairs() {
        let a = CircuitParams::new(1.0, 1.0, 0.5).unwrap();
        let b = CircuitParams::new(2.0, 0.5, 1.0).unwrap();
        assert_eq!(characteristic_partner(&a, 2.0).unwrap(), b);
        let c = check_characteristic_invariance(&a, &b, 1.0, &settings(), 1e-6).unwrap();
        assert!(c.pass, "{c:?}");
        let same = check_characteristic_invariance(&a, &a, 1.0, &settings(), 1e-6).unwrap();
        assert_eq!(same.abs_residual, 0.0);
        let off = CircuitParams::new(2.0, 0.4, 1.0).unwrap();
        assert!(matches!(
            check_characteristic_invariance(&a, &off, 1.0, &settings(), 1e-6),
            Err(Error::CharacteristicMismatch { .. })
        ));
    }

    #[test]
    fn stencil_leaving_underdamped_region_is_an_error() {
        // R within one step of critical damping
        let params = CircuitParams::new(1.0, 1.0, 1.0 - 5e-5).unwrap();
        let oracle = OraclePoint::at_dim(&params, 1.0, 32).unwrap();
        let pt = VerificationPoint::new(oracle);
        assert!(matches!(
            pt.parameter_slope(ParamTag::Resistance),
            Err(Error::StencilDomain { .. })
        ));
    }

    #[test]
    fn unconverged_oracle_makes_checks_inconclusive() {
        let params = CircuitParams::new(1.0, 1.0, 0.5).unwrap();
        let pt = VerificationPoint::new(OraclePoint::at_dim(&params, 1.0, 48).unwrap());
        let c = pt.check_fluctuation(1e-5).unwrap();
        assert!(c.is_inconclusive());
        assert!(!c.pass);
    }

    #[test]
    fn one_shot_wrappers() {
        let params = CircuitParams::new(1.0, 1.0, 0.5).unwrap();
        let c = check_ghft_beta_form(&params, 1.0, ParamTag::Resistance, &settings()).unwrap();
        assert!(c.pass, "{c:?}");
        let c = check_entropy_variation(
            &params,
            1.0,
            ParamTag::Capacitance,
            EntropyForm::BetaDerivative,
            &settings(),
        )
        .unwrap();
        assert!(c.pass, "{c:?}");
    }
}
