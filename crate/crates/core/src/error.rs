use thiserror::Error;

/// Errors raised by problem construction and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{kind} index {index} out of range (len {len})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible point: element {element} carries power {power:.6e} > budget {budget:.6e}")]
    Infeasible {
        element: usize,
        power: f64,
        budget: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
