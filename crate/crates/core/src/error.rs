use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("field is null: no sample exceeds the node threshold {node_epsilon:e}")]
    NullField { node_epsilon: f64 },
    #[error("below cutoff: momentum {momentum} does not exceed the mode cutoff {cutoff}")]
    BelowCutoff { momentum: f64, cutoff: f64 },
    #[error("evanescent components: packet support reaches down to {lowest}, cutoff is {cutoff}")]
    EvanescentComponents { lowest: f64, cutoff: f64 },
    #[error("Q undefined on support at grid point {index}")]
    QUndefinedOnSupport { index: usize },
    #[error("undersampled in time: phase step {step:e} at frame {frame}, point {index}")]
    UndersampledInTime { frame: usize, index: usize, step: f64 },
    #[error("no valid points")]
    NoValidPoints,
    #[error("fields orthogonal: normalized overlap {overlap:e}")]
    FieldsOrthogonal { overlap: f64 },
    #[error("unstable time step: dt*max|V|/hbar = {ratio} must stay below {limit}")]
    UnstableStep { ratio: f64, limit: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(domain(format!("{name} must be positive and finite, got {value}")))
    }
}
