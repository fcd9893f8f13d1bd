//! Thermodynamics of the quantized RLC circuit.
//!
//! The crate pairs two independent routes to the same physics:
//!
//! * [`closed_forms`]: analytic expressions for the mode frequency, internal
//!   energy, energy fluctuation, resistor dissipation, entropy and the entropy
//!   slope with respect to the resistance.
//! * [`oracle`]: exact diagonalization of the circuit Hamiltonian on a
//!   truncated Fock basis ([`fock`]), followed by Gibbs-state arithmetic.
//!
//! [`verify`] pits the two against each other and checks the ensemble
//! Hellmann-Feynman identities with Richardson-refined finite differences.
//! [`sweep`] drives parameter grids and produces the CSV/JSON outputs used by
//! the `rlc-thermo` binary.
//!
//! Natural units (`hbar = k = 1`) are the default; both constants are fields of
//! [`CircuitParams`] so SI runs work the same way.

pub mod check;
pub mod closed_forms;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod params;
pub mod sweep;
pub mod verify;

pub use check::{CheckContext, CheckResult};
pub use closed_forms::{CharacteristicInvariants, ModeFrequency};
pub use error::{Error, Result};
pub use fock::{BasisTag, QuadratureBasis, TruncatedOperator};
pub use oracle::{
    ConvergenceReport, LadderSettings, Observable, OraclePoint, Spectrum, ThermalState,
};
pub use params::{CircuitParams, ParamTag};
