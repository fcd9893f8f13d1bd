//! Exact-diagonalization thermal oracle.
//!
//! Gibbs weights are formed relative to the ground energy with a
//! log-sum-exp, and the entropy is taken from the weights in the energy
//! eigenbasis (no matrix logarithm).

use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::check::{CheckContext, CheckResult, NEAR_ZERO};
use crate::eigen;
use crate::error::{Error, Result};
use crate::fock::{QuadratureBasis, TruncatedOperator};
use crate::params::CircuitParams;

/// Imaginary parts of ensemble averages below this are rounding noise.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<c64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `n` is the eigenvector of `eigenvalues()[n]`.
    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eigenvectors.as_ref()
    }

    /// `⟨v_n|A|v_n⟩` for every eigenvector.
    pub fn expectation_values(&self, op: &TruncatedOperator) -> Result<Vec<c64>> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: self.dim(),
            });
        }
        let v = self.eigenvectors.as_ref();
        let a = op.entries();
        let dim = self.dim();
        let nonzero: Vec<(usize, usize, c64)> = (0..dim)
            .flat_map(|j| (0..dim).map(move |i| (i, j)))
            .map(|(i, j)| (i, j, a[(i, j)]))
            .filter(|&(_, _, z)| z != c64::new(0.0, 0.0))
            .collect();
        // banded operators: walk the nonzeros instead of forming A V
        if nonzero.len() * 8 < dim * dim {
            return Ok((0..dim)
                .map(|n| {
                    nonzero
                        .iter()
                        .map(|&(i, j, z)| v[(i, n)].conj() * z * v[(j, n)])
                        .sum()
                })
                .collect());
        }
        let av = a * v;
        Ok((0..dim)
            .map(|n| {
                let mut acc = c64::new(0.0, 0.0);
                for i in 0..dim {
                    acc += v[(i, n)].conj() * av[(i, n)];
                }
                acc
            })
            .collect())
    }

    /// Real diagonal elements `⟨v_n|A|v_n⟩` of a Hermitian operator.
    pub fn diagonal_elements(&self, op: &TruncatedOperator) -> Result<Vec<f64>> {
        let values = self.expectation_values(op)?;
        let mut out = Vec::with_capacity(values.len());
        for z in values {
            if z.im.abs() > IMAGINARY_TOL * z.re.abs().max(1.0) {
                return Err(Error::HermiticityViolation { imaginary: z.im });
            }
            out.push(z.re);
        }
        Ok(out)
    }

    /// Largest `‖H v_n − E_n v_n‖ / max(1, |E_n|)`.
    pub fn max_residual(&self, h: &TruncatedOperator) -> f64 {
        let v = self.eigenvectors.as_ref();
        let hv = h.entries() * v;
        let mut worst = 0.0f64;
        for n in 0..self.dim() {
            let e = self.eigenvalues[n];
            let mut sq = 0.0;
            for i in 0..self.dim() {
                sq += (hv[(i, n)] - v[(i, n)] * e).norm_sqr();
            }
            worst = worst.max(sq.sqrt() / e.abs().max(1.0));
        }
        worst
    }

    /// Largest entry of `V†V − I`.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = self.eigenvectors.as_ref();
        let gram = v.adjoint() * v;
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - c64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a Hermitian operator.
pub fn diagonalize(h: &TruncatedOperator) -> Result<Spectrum> {
    let (eigenvalues, eigenvectors) = eigen::eigen(h.entries().as_ref())?;
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending); cheaper than [`diagonalize`].
pub fn eigenvalues(h: &TruncatedOperator) -> Result<Vec<f64>> {
    eigen::eigenvalues(h.entries().as_ref())
}

/// Gibbs weights `p_n ∝ exp(−beta E_n)` over a discrete spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    beta: f64,
    boltzmann: f64,
    ground_energy: f64,
    /// `ln Σ exp(−beta (E_n − E_0))`.
    shifted_log_sum: f64,
    /// `ln Z = shifted_log_sum − beta E_0`.
    log_partition: f64,
    probabilities: Vec<f64>,
    /// Excitation energies `E_n − E_0`.
    excitations: Vec<f64>,
}

impl ThermalState {
    /// Builds the state from ascending energies.
    pub fn from_energies(energies: &[f64], beta: f64, boltzmann: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::NonPositiveBeta(beta));
        }
        if energies.is_empty() {
            return Err(Error::InvalidDimension { dim: 0 });
        }
        let ground_energy = energies[0];
        let excitations: Vec<f64> = energies.iter().map(|e| e - ground_energy).collect();
        let unnormalized: Vec<f64> = excitations.iter().map(|x| (-beta * x).exp()).collect();
        let sum: f64 = unnormalized.iter().sum();
        let shifted_log_sum = sum.ln();
        let probabilities = unnormalized.iter().map(|w| w / sum).collect();
        Ok(Self {
            beta,
            boltzmann,
            ground_energy,
            shifted_log_sum,
            log_partition: shifted_log_sum - beta * ground_energy,
            probabilities,
            excitations,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (self.boltzmann * self.beta)
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Weight of the highest retained level.
    pub fn tail_mass(&self) -> f64 {
        *self.probabilities.last().unwrap_or(&0.0)
    }

    /// `Σ p_n values_n`.
    pub fn average(&self, values: &[f64]) -> f64 {
        self.probabilities
            .iter()
            .zip(values)
            .map(|(p, v)| p * v)
            .sum()
    }

    pub fn internal_energy(&self) -> f64 {
        self.ground_energy + self.average(&self.excitations)
    }

    pub fn fluctuation(&self) -> f64 {
        let mean = self.average(&self.excitations);
        self.probabilities
            .iter()
            .zip(&self.excitations)
            .map(|(p, x)| p * (x - mean) * (x - mean))
            .sum()
    }

    /// `−k Σ p_n ln p_n`, using `ln p_n = −beta (E_n − E_0) − ln Σ`.
    pub fn entropy(&self) -> f64 {
        let s: f64 = self
            .probabilities
            .iter()
            .zip(&self.excitations)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, x)| p * (self.beta * x + self.shifted_log_sum))
            .sum();
        self.boltzmann * s
    }

    pub fn free_energy(&self) -> f64 {
        -self.log_partition / self.beta
    }
}

/// `−k Σ p ln p` over an arbitrary distribution, with `0 ln 0 = 0`.
pub fn entropy_of_distribution(probabilities: &[f64], boltzmann: f64) -> f64 {
    let s: f64 = probabilities
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    boltzmann * s
}

pub fn thermal_state(spectrum: &Spectrum, beta: f64, boltzmann: f64) -> Result<ThermalState> {
    ThermalState::from_energies(spectrum.eigenvalues(), beta, boltzmann)
}

/// `tr(ρ A)` evaluated in the energy eigenbasis.
pub fn ensemble_average(
    state: &ThermalState,
    spectrum: &Spectrum,
    op: &TruncatedOperator,
) -> Result<f64> {
    let values = spectrum.expectation_values(op)?;
    let mut total = c64::new(0.0, 0.0);
    for (p, z) in state.probabilities().iter().zip(values) {
        total += z * *p;
    }
    if total.im.abs() > IMAGINARY_TOL {
        return Err(Error::HermiticityViolation {
            imaginary: total.im,
        });
    }
    Ok(total.re)
}

pub fn internal_energy(state: &ThermalState, _spectrum: &Spectrum) -> f64 {
    state.internal_energy()
}

pub fn fluctuation(state: &ThermalState, _spectrum: &Spectrum) -> f64 {
    state.fluctuation()
}

pub fn von_neumann_entropy(state: &ThermalState) -> f64 {
    state.entropy()
}

pub fn free_energy(state: &ThermalState) -> f64 {
    state.free_energy()
}

/// Relative tolerance for the free-energy and entropy identities.
pub const IDENTITY_TOL: f64 = 1e-10;

/// `F = ⟨H⟩ − TS` and `S = ⟨H⟩/T + k ln Z`, both from the same weights.
pub fn thermo_identities(state: &ThermalState, spectrum: &Spectrum) -> (CheckResult, CheckResult) {
    let u = internal_energy(state, spectrum);
    let s = state.entropy();
    let t = state.temperature();
    let ctx = CheckContext {
        beta: Some(state.beta()),
        n_used: Some(spectrum.dim()),
        ..CheckContext::default()
    };
    let free = CheckResult::compare(
        "free_energy_identity",
        state.free_energy(),
        u - t * s,
        IDENTITY_TOL,
        ctx.clone(),
    );
    let entropy = CheckResult::compare(
        "entropy_partition_identity",
        s,
        u / t + state.boltzmann() * state.log_partition(),
        IDENTITY_TOL,
        ctx,
    );
    (free, entropy)
}

/// Quantities the truncation ladder can be asked to converge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    InternalEnergy,
    Entropy,
    Fluctuation,
    FreeEnergy,
    /// `⟨pq + qp⟩`.
    SymmetrizedProduct,
    /// `(R/2L)⟨pq + qp⟩`.
    ResistorEnergy,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::InternalEnergy => "internal_energy",
            Observable::Entropy => "entropy",
            Observable::Fluctuation => "fluctuation",
            Observable::FreeEnergy => "free_energy",
            Observable::SymmetrizedProduct => "symmetrized_product",
            Observable::ResistorEnergy => "resistor_energy",
        }
    }

    fn needs_vectors(self) -> bool {
        matches!(
            self,
            Observable::SymmetrizedProduct | Observable::ResistorEnergy
        )
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "internal_energy" => Observable::InternalEnergy,
            "entropy" => Observable::Entropy,
            "fluctuation" => Observable::Fluctuation,
            "free_energy" => Observable::FreeEnergy,
            "symmetrized_product" => Observable::SymmetrizedProduct,
            "resistor_energy" => Observable::ResistorEnergy,
            other => return Err(Error::UnknownObservable(other.to_string())),
        })
    }
}

/// Truncation ladder: `start_dim, 2·start_dim, …` up to `max_dim`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderSettings {
    pub start_dim: usize,
    pub max_dim: usize,
    pub tail_tolerance: f64,
}

impl Default for LadderSettings {
    fn default() -> Self {
        Self {
            start_dim: 32,
            max_dim: 1024,
            tail_tolerance: 1e-14,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub dim: usize,
    pub values: Vec<f64>,
    pub tail_mass: f64,
    pub successive_change: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub observables: Vec<Observable>,
    pub n_used: usize,
    pub tail_mass: f64,
    /// Largest relative change over the requested observables on the last
    /// doubling; absent when only one dimension was evaluated.
    pub successive_change: Option<f64>,
    pub tolerance: f64,
    pub converged: bool,
    pub trace: Vec<LadderStep>,
}

/// Everything the oracle knows about one `(params, beta)` point at a fixed
/// truncation: the frozen basis, the spectrum and the Gibbs state.
#[derive(Clone, Debug)]
pub struct OraclePoint {
    params: CircuitParams,
    beta: f64,
    basis: QuadratureBasis,
    spectrum: Spectrum,
    state: ThermalState,
    report: ConvergenceReport,
}

impl OraclePoint {
    /// Evaluates at a single truncation; the report is marked unconverged.
    pub fn at_dim(params: &CircuitParams, beta: f64, dim: usize) -> Result<Self> {
        let mut point = Self::evaluate(params, beta, dim)?;
        let tail_mass = point.state.tail_mass();
        point.report = ConvergenceReport {
            observables: Vec::new(),
            n_used: dim,
            tail_mass,
            successive_change: None,
            tolerance: f64::NAN,
            converged: false,
            trace: vec![LadderStep {
                dim,
                values: Vec::new(),
                tail_mass,
                successive_change: None,
            }],
        };
        Ok(point)
    }

    /// Doubles the truncation until every requested observable changes by
    /// less than `tolerance` (relative) and the top level's weight is below
    /// the tail tolerance. Hitting the cap returns the largest-dimension
    /// result with `converged = false`.
    pub fn converge(
        params: &CircuitParams,
        beta: f64,
        observables: &[Observable],
        tolerance: f64,
        settings: &LadderSettings,
    ) -> Result<Self> {
        params.require_underdamped()?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::NonPositiveBeta(beta));
        }
        if settings.start_dim < 2 || settings.max_dim < settings.start_dim {
            return Err(Error::InvalidDimension {
                dim: settings.start_dim,
            });
        }
        let observables = if observables.is_empty() {
            vec![Observable::InternalEnergy]
        } else {
            observables.to_vec()
        };

        let mut trace = Vec::new();
        let mut previous: Option<Vec<f64>> = None;
        let mut dim = settings.start_dim;
        loop {
            let point = Self::evaluate(params, beta, dim)?;
            let values = observables
                .iter()
                .map(|o| point.value(*o))
                .collect::<Result<Vec<_>>>()?;
            let change = previous.as_ref().map(|prev| {
                prev.iter()
                    .zip(&values)
                    .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(NEAR_ZERO))
                    .fold(0.0, f64::max)
            });
            let tail_mass = point.state.tail_mass();
            trace.push(LadderStep {
                dim,
                values: values.clone(),
                tail_mass,
                successive_change: change,
            });
            let converged =
                matches!(change, Some(c) if c < tolerance) && tail_mass < settings.tail_tolerance;
            if converged || dim * 2 > settings.max_dim {
                let report = ConvergenceReport {
                    observables,
                    n_used: dim,
                    tail_mass,
                    successive_change: change,
                    tolerance,
                    converged,
                    trace,
                };
                return Ok(Self { report, ..point });
            }
            previous = Some(values);
            dim *= 2;
        }
    }

    fn evaluate(params: &CircuitParams, beta: f64, dim: usize) -> Result<Self> {
        params.require_underdamped()?;
        let basis = QuadratureBasis::new(params, dim)?;
        let spectrum = diagonalize(&basis.hamiltonian(params))?;
        let state = thermal_state(&spectrum, beta, params.boltzmann)?;
        Ok(Self {
            params: *params,
            beta,
            basis,
            spectrum,
            state,
            report: ConvergenceReport {
                observables: Vec::new(),
                n_used: dim,
                tail_mass: 0.0,
                successive_change: None,
                tolerance: f64::NAN,
                converged: false,
                trace: Vec::new(),
            },
        })
    }

    pub fn value(&self, observable: Observable) -> Result<f64> {
        Ok(match observable {
            Observable::InternalEnergy => self.state.internal_energy(),
            Observable::Entropy => self.state.entropy(),
            Observable::Fluctuation => self.state.fluctuation(),
            Observable::FreeEnergy => self.state.free_energy(),
            Observable::SymmetrizedProduct => self.symmetrized_product()?,
            Observable::ResistorEnergy => {
                let p = &self.params;
                p.resistance / (2.0 * p.inductance) * self.symmetrized_product()?
            }
        })
    }

    fn symmetrized_product(&self) -> Result<f64> {
        debug_assert!(Observable::SymmetrizedProduct.needs_vectors());
        ensemble_average(
            &self.state,
            &self.spectrum,
            self.basis.symmetrized_product(),
        )
    }

    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn basis(&self) -> &QuadratureBasis {
        &self.basis
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn state(&self) -> &ThermalState {
        &self.state
    }

    pub fn report(&self) -> &ConvergenceReport {
        &self.report
    }

    pub fn is_converged(&self) -> bool {
        self.report.converged
    }

    /// Gibbs state of this spectrum at another inverse temperature.
    pub fn state_at(&self, beta: f64) -> Result<ThermalState> {
        thermal_state(&self.spectrum, beta, self.params.boltzmann)
    }
}

/// Runs the default ladder for one observable.
pub fn converged_observable(
    params: &CircuitParams,
    beta: f64,
    observable: Observable,
    tolerance: f64,
) -> Result<(f64, ConvergenceReport)> {
    let point = OraclePoint::converge(
        params,
        beta,
        &[observable],
        tolerance,
        &LadderSettings::default(),
    )?;
    Ok((point.value(observable)?, point.report.clone()))
}
