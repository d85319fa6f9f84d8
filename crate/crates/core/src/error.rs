use thiserror::Error;

/// Contract violations raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },
    #[error("index {index} out of range for {what} (valid 1..={max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl AlgebraError {
    pub(crate) fn index(what: &'static str, index: usize, max: usize) -> Self {
        AlgebraError::IndexOutOfRange { what, index, max }
    }
}
