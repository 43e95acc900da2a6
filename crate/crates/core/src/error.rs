//! Crate error type.

use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// Variants are grouped by failure class so that callers (notably the CLI)
/// can map them onto coarse exit categories: invalid input, numeric
/// tolerance failure, or internal invariant breach.
#[derive(Debug, Error)]
pub enum Error {
    // ---- invalid input ----------------------------------------------------
    #[error("invalid generator specification: {0}")]
    InvalidSpec(String),

    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // ---- numeric tolerance failures ---------------------------------------
    #[error("trigonometric polynomial is identically zero")]
    ZeroPolynomial,

    #[error("root finding did not meet the conditioning budget: {0}")]
    RootConditioning(String),

    #[error("nonzero remainder {residual:.3e} dividing out a zero of order {order} at {location}")]
    NonzeroRemainder {
        location: f64,
        order: u32,
        residual: f64,
    },

    #[error("zero of odd multiplicity {multiplicity} at {location}; nonnegative weights have even-order zeros")]
    OddMultiplicity { location: f64, multiplicity: u32 },

    #[error("factorization residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    FactorizationResidual { residual: f64, tol: f64 },

    #[error("weight has zeros on the torus; the regular dual requires a strictly positive weight")]
    WeightHasZeros,

    #[error("interpolation residual {residual:.3e} exceeds tolerance {tol:.3e} for shift {n}")]
    InterpolationResidual { n: i64, residual: f64, tol: f64 },

    #[error("quadrature failed to converge: {0}")]
    QuadratureDiverged(String),

    #[error(
        "integer shifts of the reference generator are not orthonormal (deviation {deviation:.3e})"
    )]
    ShiftsNotOrthonormal { deviation: f64 },

    #[error("generator transform vanishes to order {found} at {location}, below the required order {required}")]
    InsufficientZeroOrder {
        location: f64,
        required: u32,
        found: u32,
    },

    #[error("evaluation point {xi} is within {margin:.3e} of a singular point of the weight")]
    NearSingularPoint { xi: f64, margin: f64 },

    #[error("declared decay exponent p = {p} is too slow; the periodization needs p > 1/2")]
    DecayTooSlow { p: f64 },

    #[error("ξ = {xi} is within 1e-9 of an integer; the lattice sums diverge there")]
    XiNearInteger { xi: f64 },

    #[error(
        "missing generalized Fourier coefficients: need |k| <= {needed}, have |k| <= {available}"
    )]
    MissingCoefficients { needed: i64, available: i64 },

    // ---- internal invariant breaches ---------------------------------------
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// Coarse classification used for process exit codes.
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidSpec(_) | DegreeCap { .. } | InvalidArgument(_) => ErrorClass::InvalidInput,
            Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Tolerance,
        }
    }
}

/// Failure class, used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Tolerance,
    Internal,
}
