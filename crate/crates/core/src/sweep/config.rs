//! Declarative run configuration.
//!
//! Every field has a default, and the shipped `config/default.toml` spells
//! all of them out. A user file only needs the keys it changes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::oracle::{LadderSettings, Observable};
use crate::params::CircuitParams;
use crate::verify::{Tolerances, VerifierSettings};

pub const CONFIG_VERSION: u32 = 1;

/// Text of the shipped default configuration.
pub const DEFAULT_CONFIG_TOML: &str = include_str!("../../config/default.toml");

/// Smallest relative distance to critical damping accepted when
/// `allow_near_critical` is set.
pub const MIN_CRITICAL_MARGIN: f64 = 1e-6;

/// Relative distance to critical damping required otherwise.
pub const DEFAULT_CRITICAL_MARGIN: f64 = 1e-3;

/// A one-dimensional grid: an explicit list, or `count` evenly spaced points
/// from `start` to `stop` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Linspace { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn linspace(start: f64, stop: f64, count: usize) -> Self {
        Grid::Linspace { start, stop, count }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Linspace { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![start],
                _ => {
                    let step = (stop - start) / (count - 1) as f64;
                    (0..count)
                        .map(|i| {
                            if i + 1 == count {
                                stop
                            } else {
                                start + step * i as f64
                            }
                        })
                        .collect()
                }
            },
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let values = self.values();
        if values.is_empty() {
            return Err(Error::Config(format!("{what}: grid is empty")));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "{what}: non-finite grid value {bad}"
            )));
        }
        Ok(())
    }
}

/// What a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "L")]
    Inductance,
    #[serde(rename = "C")]
    Capacitance,
    #[serde(rename = "R")]
    Resistance,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "T")]
    Temperature,
}

/// Quantities a sweep can tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepObservable {
    #[serde(rename = "internal_energy")]
    InternalEnergy,
    #[serde(rename = "entropy")]
    Entropy,
    #[serde(rename = "fluctuation")]
    Fluctuation,
    #[serde(rename = "resistor_energy")]
    ResistorEnergy,
    #[serde(rename = "dS_dR")]
    EntropySlope,
    #[serde(rename = "omega")]
    Omega,
}

impl SweepObservable {
    pub const ALL: [SweepObservable; 6] = [
        SweepObservable::InternalEnergy,
        SweepObservable::Entropy,
        SweepObservable::Fluctuation,
        SweepObservable::ResistorEnergy,
        SweepObservable::EntropySlope,
        SweepObservable::Omega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepObservable::InternalEnergy => "internal_energy",
            SweepObservable::Entropy => "entropy",
            SweepObservable::Fluctuation => "fluctuation",
            SweepObservable::ResistorEnergy => "resistor_energy",
            SweepObservable::EntropySlope => "dS_dR",
            SweepObservable::Omega => "omega",
        }
    }
}

impl fmt::Display for SweepObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::UnknownObservable(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Units {
    pub hbar: f64,
    pub boltzmann: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            boltzmann: 1.0,
        }
    }
}

impl Units {
    pub fn params(&self, l: f64, c: f64, r: f64) -> Result<CircuitParams> {
        CircuitParams::with_units(l, c, r, self.hbar, self.boltzmann)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub start_dim: usize,
    pub max_dim: usize,
    pub tail_tolerance: f64,
    /// Relative change between successive doublings accepted as converged.
    pub convergence_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        let ladder = LadderSettings::default();
        Self {
            start_dim: ladder.start_dim,
            max_dim: ladder.max_dim,
            tail_tolerance: ladder.tail_tolerance,
            convergence_tolerance: 1e-5,
        }
    }
}

impl OracleConfig {
    pub fn ladder(&self) -> LadderSettings {
        LadderSettings {
            start_dim: self.start_dim,
            max_dim: self.max_dim,
            tail_tolerance: self.tail_tolerance,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.start_dim < 2 || self.max_dim < self.start_dim {
            return Err(Error::Config(format!(
                "oracle: need 2 <= start_dim <= max_dim, got {} and {}",
                self.start_dim, self.max_dim
            )));
        }
        if !(self.tail_tolerance > 0.0 && self.convergence_tolerance > 0.0) {
            return Err(Error::Config("oracle: tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// The grid and settings behind `check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub inductance: Vec<f64>,
    pub capacitance: Vec<f64>,
    /// `R` as a fraction of `sqrt(L/C)`.
    pub resistance_fraction: Vec<f64>,
    /// `beta hbar omega` at each point.
    pub reduced_frequency: Vec<f64>,
    /// Truncation and depth of the level-spacing check.
    pub spectrum_dim: usize,
    pub spectrum_levels: usize,
    pub spectrum_tolerance: f64,
    pub pure_state_dim: usize,
    pub pure_state_levels: Vec<usize>,
    /// `[L, C, R fraction]` points paired with `(sL, C/s, sR)`.
    pub characteristic_bases: Vec<[f64; 3]>,
    pub characteristic_scales: Vec<f64>,
    pub characteristic_beta: f64,
    pub probe: bool,
    pub tolerances: Tolerances,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            inductance: vec![0.5, 1.0, 2.0],
            capacitance: vec![0.5, 1.0, 2.0],
            resistance_fraction: vec![0.0, 0.3, 0.6, 0.9],
            reduced_frequency: vec![0.1, 0.5, 1.0, 3.0, 10.0],
            spectrum_dim: 512,
            spectrum_levels: 64,
            spectrum_tolerance: 1e-8,
            pure_state_dim: 256,
            pure_state_levels: vec![0, 1, 5],
            characteristic_bases: vec![
                [0.5, 0.5, 0.3],
                [0.5, 2.0, 0.6],
                [1.0, 1.0, 0.3],
                [1.0, 0.5, 0.6],
                [2.0, 1.0, 0.9],
            ],
            characteristic_scales: vec![2.0, 4.0],
            characteristic_beta: 1.0,
            probe: true,
            tolerances: Tolerances::default(),
        }
    }
}

impl CheckConfig {
    fn validate(&self) -> Result<()> {
        for (what, grid) in [
            ("check.inductance", &self.inductance),
            ("check.capacitance", &self.capacitance),
            ("check.resistance_fraction", &self.resistance_fraction),
            ("check.reduced_frequency", &self.reduced_frequency),
        ] {
            Grid::List(grid.clone()).validate(what)?;
        }
        if let Some(f) = self
            .resistance_fraction
            .iter()
            .find(|f| !(0.0..1.0).contains(*f))
        {
            return Err(Error::Overdamped {
                resistance: *f,
                critical: 1.0,
            });
        }
        if self.spectrum_levels + 1 >= self.spectrum_dim {
            return Err(Error::Config(format!(
                "check: spectrum_levels {} needs spectrum_dim above it",
                self.spectrum_levels
            )));
        }
        if !(self.characteristic_beta.is_finite() && self.characteristic_beta > 0.0) {
            return Err(Error::NonPositiveBeta(self.characteristic_beta));
        }
        for base in &self.characteristic_bases {
            if !(0.0..1.0).contains(&base[2]) {
                return Err(Error::Overdamped {
                    resistance: base[2],
                    critical: 1.0,
                });
            }
        }
        Ok(())
    }
}

/// The entropy-versus-resistance curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntropySweepConfig {
    pub inductance: f64,
    pub capacitance: f64,
    pub beta: f64,
    pub resistance: Grid,
    pub allow_near_critical: bool,
    pub cross_check: bool,
}

impl Default for EntropySweepConfig {
    fn default() -> Self {
        Self {
            inductance: 1.0,
            capacitance: 1.0,
            beta: 1.0,
            resistance: Grid::linspace(0.0, 0.99, 100),
            allow_near_critical: false,
            cross_check: false,
        }
    }
}

/// A general observable sweep along one axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub inductance: f64,
    pub capacitance: f64,
    pub resistance: f64,
    pub beta: f64,
    pub axis: SweepAxis,
    pub grid: Grid,
    pub observables: Vec<SweepObservable>,
    pub allow_near_critical: bool,
    pub cross_check: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            inductance: 1.0,
            capacitance: 1.0,
            resistance: 0.0,
            beta: 1.0,
            axis: SweepAxis::Resistance,
            grid: Grid::linspace(0.0, 0.99, 100),
            observables: SweepObservable::ALL.to_vec(),
            allow_near_critical: false,
            cross_check: false,
        }
    }
}

/// One ladder run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub inductance: f64,
    pub capacitance: f64,
    pub resistance: f64,
    pub beta: f64,
    pub observable: Observable,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            inductance: 1.0,
            capacitance: 1.0,
            resistance: 0.9,
            beta: 0.1,
            observable: Observable::InternalEnergy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    pub units: Units,
    pub oracle: OracleConfig,
    pub check: CheckConfig,
    pub sweep_entropy: EntropySweepConfig,
    pub sweep: SweepConfig,
    pub convergence: ConvergenceConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            units: Units::default(),
            oracle: OracleConfig::default(),
            check: CheckConfig::default(),
            sweep_entropy: EntropySweepConfig::default(),
            sweep: SweepConfig::default(),
            convergence: ConvergenceConfig::default(),
        }
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Structural checks that do not need any physics; domain checks on the
    /// sweep grids happen when the grids are expanded.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        self.units.params(1.0, 1.0, 0.0)?;
        self.oracle.validate()?;
        self.check.validate()?;
        self.sweep_entropy
            .resistance
            .validate("sweep_entropy.resistance")?;
        self.sweep.grid.validate("sweep.grid")?;
        if self.sweep.observables.is_empty() {
            return Err(Error::Config("sweep.observables is empty".into()));
        }
        Ok(())
    }

    pub fn verifier_settings(&self) -> VerifierSettings {
        VerifierSettings {
            ladder: self.oracle.ladder(),
            convergence_tolerance: self.oracle.convergence_tolerance,
            tolerances: self.check.tolerances,
        }
    }

    /// SHA-256 of the configuration's JSON serialization, in field order.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Rejects points at or beyond critical damping. With `allow_near_critical`
/// the margin shrinks from [`DEFAULT_CRITICAL_MARGIN`] to
/// [`MIN_CRITICAL_MARGIN`], relative to `sqrt(L/C)`.
pub fn require_margin(params: &CircuitParams, allow_near_critical: bool) -> Result<()> {
    let critical = params.critical_resistance();
    let margin = if allow_near_critical {
        MIN_CRITICAL_MARGIN
    } else {
        DEFAULT_CRITICAL_MARGIN
    };
    // a hair of slack so that (1 − margin)·sqrt(L/C) itself is accepted
    if params.resistance > critical * (1.0 - margin) * (1.0 + 4.0 * f64::EPSILON) {
        let hint = if allow_near_critical {
            ""
        } else {
            " (set allow_near_critical to go closer)"
        };
        return Err(Error::Config(format!(
            "R = {} is within {margin:e}·sqrt(L/C) of critical damping sqrt(L/C) = {critical}{hint}",
            params.resistance
        )));
    }
    Ok(())
}
