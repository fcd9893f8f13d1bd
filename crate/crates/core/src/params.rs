use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the series RLC circuit plus the unit constants.
///
/// `inductance` plays the role of a mass, so `p = L dq/dt` is the momentum
/// conjugate to the charge `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub inductance: f64,
    pub capacitance: f64,
    pub resistance: f64,
    pub hbar: f64,
    pub boltzmann: f64,
}

impl CircuitParams {
    /// Natural units: `hbar = k = 1`.
    pub fn new(inductance: f64, capacitance: f64, resistance: f64) -> Result<Self> {
        Self::with_units(inductance, capacitance, resistance, 1.0, 1.0)
    }

    pub fn with_units(
        inductance: f64,
        capacitance: f64,
        resistance: f64,
        hbar: f64,
        boltzmann: f64,
    ) -> Result<Self> {
        let params = Self {
            inductance,
            capacitance,
            resistance,
            hbar,
            boltzmann,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        positive("inductance", self.inductance)?;
        positive("capacitance", self.capacitance)?;
        positive("hbar", self.hbar)?;
        positive("boltzmann", self.boltzmann)?;
        if !(self.resistance.is_finite() && self.resistance >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "resistance",
                value: self.resistance,
                reason: "must be finite and non-negative",
            });
        }
        Ok(())
    }

    /// Critical resistance `sqrt(L/C)` separating the under- and overdamped regimes.
    pub fn critical_resistance(&self) -> f64 {
        (self.inductance / self.capacitance).sqrt()
    }

    /// `1/(LC) - R^2/L^2`, the squared mode frequency (negative when overdamped).
    pub fn omega_squared(&self) -> f64 {
        omega_squared(self.inductance, self.capacitance, self.resistance)
    }

    pub fn is_underdamped(&self) -> bool {
        self.omega_squared() > 0.0
    }

    pub fn require_underdamped(&self) -> Result<()> {
        self.validate()?;
        if self.is_underdamped() {
            Ok(())
        } else {
            Err(Error::Overdamped {
                resistance: self.resistance,
                critical: self.critical_resistance(),
            })
        }
    }

    pub fn get(&self, tag: ParamTag) -> f64 {
        match tag {
            ParamTag::Inductance => self.inductance,
            ParamTag::Capacitance => self.capacitance,
            ParamTag::Resistance => self.resistance,
        }
    }

    /// Copy with one circuit parameter replaced, validated.
    pub fn with(&self, tag: ParamTag, value: f64) -> Result<Self> {
        let mut out = *self;
        match tag {
            ParamTag::Inductance => out.inductance = value,
            ParamTag::Capacitance => out.capacitance = value,
            ParamTag::Resistance => out.resistance = value,
        }
        out.validate()?;
        Ok(out)
    }

    /// Temperature derived from the inverse temperature; never stored separately.
    pub fn temperature(&self, beta: f64) -> f64 {
        1.0 / (self.boltzmann * beta)
    }

    /// Inverse temperature at which `beta * hbar * omega` equals `reduced`.
    pub fn beta_for_reduced_frequency(&self, reduced: f64) -> Result<f64> {
        self.require_underdamped()?;
        Ok(reduced / (self.hbar * self.omega_squared().sqrt()))
    }
}

pub(crate) fn omega_squared(l: f64, c: f64, r: f64) -> f64 {
    1.0 / (l * c) - (r * r) / (l * l)
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

/// The circuit parameter a derivative is taken with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParamTag {
    #[serde(rename = "L")]
    Inductance,
    #[serde(rename = "C")]
    Capacitance,
    #[serde(rename = "R")]
    Resistance,
}

impl ParamTag {
    pub const ALL: [ParamTag; 3] = [
        ParamTag::Inductance,
        ParamTag::Capacitance,
        ParamTag::Resistance,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ParamTag::Inductance => "L",
            ParamTag::Capacitance => "C",
            ParamTag::Resistance => "R",
        }
    }
}

impl fmt::Display for ParamTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ParamTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "inductance" => Ok(ParamTag::Inductance),
            "C" | "c" | "capacitance" => Ok(ParamTag::Capacitance),
            "R" | "r" | "resistance" => Ok(ParamTag::Resistance),
            other => Err(Error::UnknownParameter(other.to_string())),
        }
    }
}
