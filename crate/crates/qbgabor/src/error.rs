//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signals live on different groups (orders {left} and {right})")]
    GroupMismatch { left: usize, right: usize },

    #[error("array of length {got} does not match expected shape {expected}")]
    ShapeMismatch { expected: String, got: usize },

    #[error("arrays have mismatched lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("window radius {radius} covers {span} points, more than the group order {order}")]
    RadiusTooLarge {
        radius: usize,
        span: usize,
        order: usize,
    },

    #[error("weight must be strictly positive, entry {index} is {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weight fails the {kind} inequality: ratio {worst_ratio} at pair ({x}, {y})")]
    WeightCheckFailed {
        kind: &'static str,
        worst_ratio: f64,
        x: usize,
        y: usize,
    },

    #[error("invalid exponent: {reason}")]
    InvalidExponent { reason: String },

    #[error("system is not a frame: lower bound {lower:.3e} <= {threshold:.3e} (upper bound {upper:.3e})")]
    NotAFrame {
        lower: f64,
        upper: f64,
        threshold: f64,
    },

    #[error("iteration stalled: residual ratio {ratio:.3} exceeded predicted {predicted:.3} for {count} consecutive steps")]
    NeumannStalled {
        ratio: f64,
        predicted: f64,
        count: usize,
    },

    #[error("approximation operator is not contractive: residual ratio {ratio:.3} >= 1 for {count} consecutive steps")]
    NotContractive { ratio: f64, count: usize },

    #[error("iteration did not converge within {max_iter} steps (residual {residual:.3e})")]
    MaxIterExceeded { max_iter: usize, residual: f64 },

    #[error("point set with covering radius {density} is not dense for window radius {radius}")]
    NotDense { density: usize, radius: usize },

    #[error("requested {requested} terms but only {available} coefficients exist")]
    CountTooLarge { requested: usize, available: usize },

    #[error("invalid fit window: {reason}")]
    InvalidFitWindow { reason: String },

    #[error("invalid parameters: {reason}")]
    BadParams { reason: String },

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn bad_params(reason: impl Into<String>) -> Self {
        Error::BadParams {
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid_exponent(reason: impl Into<String>) -> Self {
        Error::InvalidExponent {
            reason: reason.into(),
        }
    }
}
