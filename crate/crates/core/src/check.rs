//! One verification record: two numbers that should agree, and the verdict.

use serde::{Deserialize, Serialize};

use crate::params::{CircuitParams, ParamTag};

/// Lower bound on the scale used to form relative residuals.
pub const RELATIVE_FLOOR: f64 = 1e-12;
/// Both sides below this magnitude switch the check to an absolute test.
pub const NEAR_ZERO: f64 = 1e-9;

/// Where a check was evaluated.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckContext {
    pub inductance: f64,
    pub capacitance: f64,
    pub resistance: f64,
    pub beta: Option<f64>,
    pub parameter: Option<ParamTag>,
    pub n_used: Option<usize>,
    pub level: Option<usize>,
    pub grid_index: Option<usize>,
    /// Set when the oracle could not certify the inputs (truncation not
    /// converged, eigenvalue tracking ambiguous). Such a check never passes.
    pub inconclusive: Option<String>,
}

impl CheckContext {
    pub fn new(params: &CircuitParams, beta: f64) -> Self {
        Self {
            inductance: params.inductance,
            capacitance: params.capacitance,
            resistance: params.resistance,
            beta: Some(beta),
            ..Self::default()
        }
    }

    pub fn parameter(mut self, tag: ParamTag) -> Self {
        self.parameter = Some(tag);
        self
    }

    pub fn n_used(mut self, n: usize) -> Self {
        self.n_used = Some(n);
        self
    }

    pub fn level(mut self, level: usize) -> Self {
        self.level = Some(level);
        self
    }

    pub fn inconclusive(mut self, reason: impl Into<String>) -> Self {
        self.inconclusive = Some(reason.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: CheckContext,
}

impl CheckResult {
    /// Compares `lhs` and `rhs` relative to the larger of the two.
    pub fn compare(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        context: CheckContext,
    ) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        Self::with_scale(name, lhs, rhs, scale, tolerance, context)
    }

    /// Compares `lhs` and `rhs` relative to an externally supplied magnitude,
    /// for identities whose exact value is zero.
    pub fn with_scale(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        scale: f64,
        tolerance: f64,
        context: CheckContext,
    ) -> Self {
        let abs_residual = (lhs - rhs).abs();
        let rel_residual = abs_residual / scale.abs().max(RELATIVE_FLOOR);
        let verdict = if scale.abs() < NEAR_ZERO {
            abs_residual < tolerance.min(NEAR_ZERO)
        } else {
            rel_residual < tolerance
        };
        let pass = verdict && context.inconclusive.is_none() && lhs.is_finite() && rhs.is_finite();
        Self {
            name: name.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tolerance,
            pass,
            context,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        self.context.inconclusive.is_some()
    }

    pub fn with_grid_index(mut self, index: usize) -> Self {
        self.context.grid_index = Some(index);
        self
    }

    /// Same comparison redone under a different tolerance.
    pub fn retolerate(&self, tolerance: f64) -> Self {
        let scale = if self.rel_residual > 0.0 {
            self.abs_residual / self.rel_residual
        } else {
            self.lhs.abs().max(self.rhs.abs())
        };
        Self::with_scale(
            self.name.clone(),
            self.lhs,
            self.rhs,
            scale,
            tolerance,
            self.context.clone(),
        )
    }
}
