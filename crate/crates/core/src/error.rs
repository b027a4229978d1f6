use thiserror::Error;

use crate::kwapien::IntegralityWitness;
use crate::presentation::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("measures live on different spaces")]
    SpaceMismatch,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("coordinate {index} out of range for arity {arity}")]
    CoordinateOutOfRange { index: usize, arity: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point `{0}` in ordered space")]
    DuplicatePoint(String),

    #[error("atom weight must be strictly positive")]
    NonPositiveWeight,

    #[error("map undefined at atom {0:?}")]
    MapUndefined(Vec<usize>),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("atom {atom:?} repeats a point (condition A2/B1 violated)")]
    RepeatedPoint { atom: Vec<usize> },

    #[error("invalid presentation: {} violation(s)", .0.violations.len())]
    InvalidPresentation(Box<ValidationReport>),

    #[error("operator is not integral at y={}, x={}", .0.y, .0.x)]
    NonIntegral(Box<IntegralityWitness>),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("family check failed: unitarity residual {unitarity}, commutation residual {commutation}")]
    FamilyCheck { unitarity: f64, commutation: f64 },

    #[error("simultaneous diagonalization did not reach target; worst residual {worst_residual}")]
    Diagonalization { worst_residual: f64 },

    #[error("weight {weight} at point {point} exceeds bound {bound}")]
    WeightOutOfBound { point: usize, weight: i64, bound: i64 },

    #[error("rounding residual {residual} at point {point} exceeds {limit}")]
    RoundingResidual { point: usize, residual: f64, limit: f64 },

    #[error("sample denominator {q} and weight bound {bound} violate 2B < q")]
    InvalidSampling { q: u32, bound: i64 },

    #[error("cannot truncate depth {from} to deeper depth {to}")]
    DepthMismatch { from: usize, to: usize },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Domain errors are violations of mathematical preconditions; everything
    /// else is malformed input.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Parse(_) | Error::UnknownPoint(_) | Error::DuplicatePoint(_))
    }
}
