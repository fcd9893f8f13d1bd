//! Observable sweeps, the entropy curve and single-point ladder runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{
    require_margin, Config, ConvergenceConfig, EntropySweepConfig, OracleConfig, SweepAxis,
    SweepConfig, SweepObservable, Units,
};
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::oracle::{ConvergenceReport, Observable, OraclePoint};
use crate::params::{CircuitParams, ParamTag};
use crate::verify::VerificationPoint;

/// One row of the entropy-versus-resistance curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub index: usize,
    #[serde(rename = "L")]
    pub inductance: f64,
    #[serde(rename = "C")]
    pub capacitance: f64,
    #[serde(rename = "R")]
    pub resistance: f64,
    pub beta: f64,
    pub omega: f64,
    #[serde(rename = "S_cf")]
    pub entropy: f64,
    #[serde(rename = "S_oracle")]
    pub entropy_oracle: Option<f64>,
    #[serde(rename = "dSdR_cf")]
    pub entropy_slope: f64,
    pub converged: Option<bool>,
    #[serde(rename = "N_used")]
    pub n_used: Option<usize>,
}

pub const ENTROPY_HEADER: [&str; 11] = [
    "index",
    "L",
    "C",
    "R",
    "beta",
    "omega",
    "S_cf",
    "S_oracle",
    "dSdR_cf",
    "converged",
    "N_used",
];

fn oracle_tolerance(oracle: &OracleConfig) -> (f64, crate::oracle::LadderSettings) {
    (oracle.convergence_tolerance, oracle.ladder())
}

/// `S(R)` from the closed form, plus the oracle entropy when `cross_check`
/// is set. Rows come back in grid order.
pub fn entropy_sweep(
    spec: &EntropySweepConfig,
    units: &Units,
    oracle: &OracleConfig,
) -> Result<Vec<EntropyRow>> {
    let params = spec
        .resistance
        .values()
        .into_iter()
        .map(|r| {
            let p = units.params(spec.inductance, spec.capacitance, r)?;
            require_margin(&p, spec.allow_near_critical)?;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let (tolerance, ladder) = oracle_tolerance(oracle);
    params
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let (entropy_oracle, converged, n_used) = if spec.cross_check {
                let point = OraclePoint::converge(
                    p,
                    spec.beta,
                    &[Observable::Entropy],
                    tolerance,
                    &ladder,
                )?;
                (
                    Some(point.state().entropy()),
                    Some(point.is_converged()),
                    Some(point.dim()),
                )
            } else {
                (None, None, None)
            };
            Ok(EntropyRow {
                index,
                inductance: p.inductance,
                capacitance: p.capacitance,
                resistance: p.resistance,
                beta: spec.beta,
                omega: closed_forms::omega(p)?.omega,
                entropy: closed_forms::entropy(p, spec.beta)?,
                entropy_oracle,
                entropy_slope: closed_forms::entropy_slope_resistance(p, spec.beta)?,
                converged,
                n_used,
            })
        })
        .collect()
}

/// Closed-form and (optionally) oracle value of one observable in a row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableValue {
    pub observable: SweepObservable,
    pub closed_form: f64,
    pub oracle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    #[serde(rename = "L")]
    pub inductance: f64,
    #[serde(rename = "C")]
    pub capacitance: f64,
    #[serde(rename = "R")]
    pub resistance: f64,
    pub beta: f64,
    pub values: Vec<ObservableValue>,
    pub converged: Option<bool>,
    #[serde(rename = "N_used")]
    pub n_used: Option<usize>,
}

impl SweepRow {
    pub fn value(&self, observable: SweepObservable) -> Option<&ObservableValue> {
        self.values.iter().find(|v| v.observable == observable)
    }
}

/// Column names for a sweep over `observables`.
pub fn sweep_header(observables: &[SweepObservable]) -> Vec<String> {
    let mut header: Vec<String> = ["index", "L", "C", "R", "beta"].map(String::from).to_vec();
    for o in observables {
        header.push(format!("{o}_cf"));
        header.push(format!("{o}_oracle"));
    }
    header.push("converged".into());
    header.push("N_used".into());
    header
}

fn closed_form(observable: SweepObservable, p: &CircuitParams, beta: f64) -> Result<f64> {
    match observable {
        SweepObservable::InternalEnergy => closed_forms::internal_energy(p, beta),
        SweepObservable::Entropy => closed_forms::entropy(p, beta),
        SweepObservable::Fluctuation => closed_forms::fluctuation(p, beta),
        SweepObservable::ResistorEnergy => closed_forms::resistor_energy(p, beta),
        SweepObservable::EntropySlope => closed_forms::entropy_slope_resistance(p, beta),
        SweepObservable::Omega => Ok(closed_forms::omega(p)?.omega),
    }
}

/// The ladder observable that certifies each sweep observable.
fn ladder_observable(observable: SweepObservable) -> Observable {
    match observable {
        SweepObservable::InternalEnergy | SweepObservable::Omega => Observable::InternalEnergy,
        SweepObservable::Entropy | SweepObservable::EntropySlope => Observable::Entropy,
        SweepObservable::Fluctuation => Observable::Fluctuation,
        SweepObservable::ResistorEnergy => Observable::ResistorEnergy,
    }
}

fn oracle_value(observable: SweepObservable, point: &VerificationPoint) -> Result<f64> {
    let oracle = point.oracle();
    match observable {
        SweepObservable::InternalEnergy => oracle.value(Observable::InternalEnergy),
        SweepObservable::Entropy => oracle.value(Observable::Entropy),
        SweepObservable::Fluctuation => oracle.value(Observable::Fluctuation),
        SweepObservable::ResistorEnergy => oracle.value(Observable::ResistorEnergy),
        SweepObservable::EntropySlope => {
            Ok(point.parameter_slope(ParamTag::Resistance)?.entropy.value)
        }
        SweepObservable::Omega => {
            let e = oracle.spectrum().eigenvalues();
            Ok((e[1] - e[0]) / oracle.params().hbar)
        }
    }
}

/// `(params, beta)` at every grid value of the sweep axis.
pub fn sweep_points(spec: &SweepConfig, units: &Units) -> Result<Vec<(CircuitParams, f64)>> {
    spec.grid
        .values()
        .into_iter()
        .map(|v| {
            let (mut l, mut c, mut r, mut beta) = (
                spec.inductance,
                spec.capacitance,
                spec.resistance,
                spec.beta,
            );
            match spec.axis {
                SweepAxis::Inductance => l = v,
                SweepAxis::Capacitance => c = v,
                SweepAxis::Resistance => r = v,
                SweepAxis::Beta => beta = v,
                SweepAxis::Temperature => beta = 1.0 / (units.boltzmann * v),
            }
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::NonPositiveBeta(beta));
            }
            let p = units.params(l, c, r)?;
            require_margin(&p, spec.allow_near_critical)?;
            Ok((p, beta))
        })
        .collect()
}

pub fn observable_sweep(
    spec: &SweepConfig,
    units: &Units,
    oracle: &OracleConfig,
) -> Result<Vec<SweepRow>> {
    let points = sweep_points(spec, units)?;
    let (tolerance, ladder) = oracle_tolerance(oracle);
    let mut tracked: Vec<Observable> = Vec::new();
    for o in &spec.observables {
        let t = ladder_observable(*o);
        if !tracked.contains(&t) {
            tracked.push(t);
        }
    }
    points
        .par_iter()
        .enumerate()
        .map(|(index, (p, beta))| {
            let point = if spec.cross_check {
                Some(VerificationPoint::new(OraclePoint::converge(
                    p, *beta, &tracked, tolerance, &ladder,
                )?))
            } else {
                None
            };
            let values = spec
                .observables
                .iter()
                .map(|&o| {
                    Ok(ObservableValue {
                        observable: o,
                        closed_form: closed_form(o, p, *beta)?,
                        oracle: point.as_ref().map(|pt| oracle_value(o, pt)).transpose()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow {
                index,
                inductance: p.inductance,
                capacitance: p.capacitance,
                resistance: p.resistance,
                beta: *beta,
                values,
                converged: point.as_ref().map(|pt| pt.oracle().is_converged()),
                n_used: point.as_ref().map(|pt| pt.oracle().dim()),
            })
        })
        .collect()
}

/// The doubling trace for one observable at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRun {
    pub params: CircuitParams,
    pub beta: f64,
    pub observable: Observable,
    /// The closed-form value, where one exists.
    pub closed_form: Option<f64>,
    pub report: ConvergenceReport,
}

pub fn convergence_run(
    spec: &ConvergenceConfig,
    units: &Units,
    oracle: &OracleConfig,
) -> Result<ConvergenceRun> {
    let params = units.params(spec.inductance, spec.capacitance, spec.resistance)?;
    let (tolerance, ladder) = oracle_tolerance(oracle);
    let point = OraclePoint::converge(&params, spec.beta, &[spec.observable], tolerance, &ladder)?;
    let beta = spec.beta;
    let closed_form = match spec.observable {
        Observable::InternalEnergy => Some(closed_forms::internal_energy(&params, beta)?),
        Observable::Entropy => Some(closed_forms::entropy(&params, beta)?),
        Observable::Fluctuation => Some(closed_forms::fluctuation(&params, beta)?),
        Observable::ResistorEnergy => Some(closed_forms::resistor_energy(&params, beta)?),
        Observable::FreeEnergy => Some(-closed_forms::log_partition(&params, beta)? / beta),
        Observable::SymmetrizedProduct => None,
    };
    Ok(ConvergenceRun {
        params,
        beta,
        observable: spec.observable,
        closed_form,
        report: point.report().clone(),
    })
}

/// Convenience wrappers over a whole [`Config`].
pub fn run_entropy_sweep(config: &Config) -> Result<Vec<EntropyRow>> {
    entropy_sweep(&config.sweep_entropy, &config.units, &config.oracle)
}

pub fn run_observable_sweep(config: &Config) -> Result<Vec<SweepRow>> {
    observable_sweep(&config.sweep, &config.units, &config.oracle)
}

pub fn run_convergence(config: &Config) -> Result<ConvergenceRun> {
    convergence_run(&config.convergence, &config.units, &config.oracle)
}
