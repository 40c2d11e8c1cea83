use thiserror::Error;

/// Every way a point evaluation can leave the validity domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("reciprocal argument {value:e} is within {tolerance:e} of zero at t = {t}")]
    Domain { t: f64, value: f64, tolerance: f64 },

    #[error("profile a1(t) = {value} is not positive at t = {t}")]
    NonpositiveA1 { t: f64, value: f64 },

    #[error("integrability denominator {value:e} vanishes at t = {t}")]
    DegenerateDenominator { t: f64, value: f64 },

    #[error("almost complex structure degenerates: {quantity} = {value} at t = {t}")]
    DegenerateStructure {
        quantity: &'static str,
        t: f64,
        value: f64,
    },

    #[error("{quantity} = {value} is not positive at t = {t}")]
    NonpositiveLambda {
        quantity: &'static str,
        t: f64,
        value: f64,
    },

    #[error("lifted metric is not positive definite ({detail})")]
    IndefiniteMetric { detail: String },

    #[error("base curvature c = 0 gives a vanishing proportionality factor")]
    ZeroCurvature,

    #[error("holomorphic sectional curvature k must be nonzero")]
    ZeroHolomorphicCurvature,

    #[error("point |x|^2 = {radius_sq} lies outside the conformal chart (limit {limit})")]
    OutsideChart { radius_sq: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("profile parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    /// Short stable tag used when tallying failures per kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::NonpositiveA1 { .. } => "NonpositiveA1",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::DegenerateStructure { .. } => "DegenerateStructure",
            Error::NonpositiveLambda { .. } => "NonpositiveLambda",
            Error::IndefiniteMetric { .. } => "IndefiniteMetric",
            Error::ZeroCurvature => "ZeroCurvature",
            Error::ZeroHolomorphicCurvature => "ZeroHolomorphicCurvature",
            Error::OutsideChart { .. } => "OutsideChart",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
