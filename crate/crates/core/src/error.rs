use thiserror::Error;

/// Rejected channel configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("input length n = {0} is below the minimum of 4")]
    InputTooShort(usize),
    #[error("erasure probability {0} is outside [0, 1)")]
    ErasureOutOfRange(f64),
    #[error("coverage depth {0} must be positive and finite")]
    Coverage(f64),
    #[error("normalized read length {0} must be positive and finite")]
    ReadLength(f64),
    #[error("read length L = {read_len} must be smaller than n = {n}")]
    ReadTooLong { read_len: usize, n: usize },
    #[error("input string has length {got}, expected {expected}")]
    InputLength { got: usize, expected: usize },
}

/// Argument outside the domain of an analytic formula.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("coverage depth must be positive, got {0}")]
    Coverage(f64),
    #[error("erasure probability {0} is outside the admissible range")]
    Erasure(f64),
    #[error("normalized read length must be positive, got {0}")]
    ReadLength(f64),
    #[error("noise-free capacity needs normalized read length above 1, got {0}")]
    ShortReads(f64),
}
