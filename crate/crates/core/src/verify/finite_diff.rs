//! Central differences refined by one Richardson step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative step for derivatives with respect to circuit parameters.
pub const PARAMETER_STEP: f64 = 1e-4;
/// Relative step for derivatives with respect to the inverse temperature.
pub const BETA_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEstimate {
    pub value: f64,
    pub step: f64,
    /// `|D(h/2) − D(h)| / 3`, the Richardson correction itself.
    pub error_estimate: f64,
}

/// `h = 1e-4 · max(1, |x|)`.
pub fn parameter_step(x: f64) -> f64 {
    PARAMETER_STEP * x.abs().max(1.0)
}

/// `h = 1e-4 · beta`.
pub fn beta_step(beta: f64) -> f64 {
    BETA_STEP * beta
}

/// Derivative of `f` at `x` from the stencil `x ± h`, `x ± h/2`.
///
/// The two central differences `D(h)` and `D(h/2)` are combined as
/// `(4 D(h/2) − D(h)) / 3`, cancelling the `h²` error term.
pub fn finite_diff<F>(mut f: F, x: f64, h: f64) -> Result<DerivativeEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let [d] = finite_diff_many(|t| Ok([f(t)?]), x, h)?;
    Ok(d)
}

/// Several derivatives sharing one stencil, for functions that produce more
/// than one value per (expensive) evaluation.
pub fn finite_diff_many<F, const K: usize>(
    mut f: F,
    x: f64,
    h: f64,
) -> Result<[DerivativeEstimate; K]>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    let d = finite_diff_vec(|t| Ok(f(t)?.to_vec()), x, h)?;
    Ok(std::array::from_fn(|k| d[k]))
}

/// [`finite_diff_many`] for a run-time number of outputs.
pub fn finite_diff_vec<F>(mut f: F, x: f64, h: f64) -> Result<Vec<DerivativeEstimate>>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: h,
            reason: "finite-difference step must be positive",
        });
    }
    let mut eval = |t: f64| -> Result<Vec<f64>> {
        let values = f(t).map_err(|e| match e {
            Error::StencilDomain { .. } => e,
            other => Error::StencilDomain {
                point: t,
                reason: other.to_string(),
            },
        })?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::StencilDomain {
                point: t,
                reason: "function is not finite here".into(),
            });
        }
        Ok(values)
    };
    let minus = eval(x - h)?;
    let plus = eval(x + h)?;
    let minus_half = eval(x - 0.5 * h)?;
    let plus_half = eval(x + 0.5 * h)?;

    Ok((0..minus.len())
        .map(|k| {
            let coarse = (plus[k] - minus[k]) / (2.0 * h);
            let fine = (plus_half[k] - minus_half[k]) / h;
            DerivativeEstimate {
                value: (4.0 * fine - coarse) / 3.0,
                step: h,
                error_estimate: (fine - coarse).abs() / 3.0,
            }
        })
        .collect())
}
