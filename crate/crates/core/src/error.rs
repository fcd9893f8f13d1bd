use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: truncated operators need at least 2 levels")]
    InvalidDimension { dim: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("overdamped circuit: R = {resistance} is not below sqrt(L/C) = {critical}")]
    Overdamped { resistance: f64, critical: f64 },

    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operators live in different bases")]
    BasisMismatch,

    #[error("operator is not Hermitian: max entry deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("ensemble average has imaginary part {imaginary:e}; operator is not Hermitian")]
    HermiticityViolation { imaginary: f64 },

    #[error("unknown parameter tag {0:?} (expected L, C or R)")]
    UnknownParameter(String),

    #[error("unknown observable {0:?}")]
    UnknownObservable(String),

    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("eigensolver failed to converge at dimension {dim}")]
    EigenSolver { dim: usize },

    #[error("finite-difference stencil point {point} is outside the domain: {reason}")]
    StencilDomain { point: f64, reason: String },

    #[error("characteristic invariant mismatch: c2 = {first} vs {second}")]
    CharacteristicMismatch { first: f64, second: f64 },

    #[error("level index {level} too close to the truncation edge of dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
