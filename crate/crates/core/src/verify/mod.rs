//! Numerical verification of the ensemble Hellmann-Feynman identities and
//! of the closed forms.

pub mod finite_diff;
pub mod identities;
pub mod probe;
pub mod spectrum;

pub use finite_diff::{finite_diff, finite_diff_many, finite_diff_vec, DerivativeEstimate};
pub use identities::{
    characteristic_partner, check_characteristic_invariance, check_commutator_average,
    check_energy_weighted_average, check_entropy_variation, check_fluctuation,
    check_ghft_beta_form, check_ghft_ensemble, check_pde_residual, EntropyForm, ParameterSlope,
    Tolerances, VerificationPoint, VerifierSettings,
};
pub use probe::{probe_linear_parameters, LinearParameterProbe};
pub use spectrum::{check_level_spacing, check_pure_state, check_pure_state_levels};
