use thiserror::Error;

/// Errors raised by the datum, heat-mass, bound and oracle routines.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("density is identically zero")]
    ZeroDatum,

    #[error("mass {mass} is not supercritical (blow-up requires M > 8π ≈ 25.1327)")]
    SubcriticalMass { mass: f64 },

    #[error("moment of order {beta} diverges or could not be resolved")]
    MomentDivergence { beta: f64 },

    #[error("L^{p} norm diverges or could not be resolved")]
    NormDivergence { p: f64 },

    #[error("datum does not have compact support")]
    UnboundedSupport,

    #[error("generalized inverse at level 1 is unbounded for non-compactly supported data")]
    Unbounded,

    #[error("time must be strictly positive, got {0}")]
    NonPositiveTime(f64),

    #[error("target {target} lies outside the open range (0, {mass})")]
    TargetOutOfRange { target: f64, mass: f64 },

    #[error("could not bracket the root within {iterations} growth steps")]
    BracketFailure { iterations: usize },

    #[error("operation requires a radially symmetric datum")]
    NotRadial,

    #[error("hypothesis check failed: {0}")]
    HypothesisCheckFailure(String),

    #[error("invalid exponents p = {p}, q = {q}: need 1 <= p <= q <= inf")]
    InvalidExponents { p: f64, q: f64 },

    #[error("invalid rates d = {d}, b = {b}: need 0 < d < b")]
    InvalidRates { d: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
