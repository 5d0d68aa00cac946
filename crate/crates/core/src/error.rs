use thiserror::Error;

/// Errors raised by domain construction, oracles and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point out of range: coordinate {index} is {value}, block size {size}")]
    OutOfRange {
        index: usize,
        value: usize,
        size: usize,
    },

    #[error("evaluation budget exceeded: needed {needed}, cap {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },

    #[error("rho block {block} is not nonincreasing at index {index} (violation {violation:.3e})")]
    NotMonotone {
        block: usize,
        index: usize,
        violation: f64,
    },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("oracle returned a non-finite value at {0:?}")]
    NonFiniteValue(Vec<usize>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("threshold solutions not monotone across t (t index {0})")]
    SweepNotMonotone(usize),

    #[error("divide-and-conquer recursion exceeded depth cap {0}")]
    RecursionDepth(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
