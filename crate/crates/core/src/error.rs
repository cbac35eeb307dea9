use thiserror::Error;

/// Errors raised by the solver toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("gauge-potential coefficient undefined (vanishing normalisation)")]
    UndefinedCoefficient,

    #[error("{n} qubits exceeds the simulator cap of {cap}")]
    QubitCap { n: usize, cap: usize },

    #[error("exhaustive enumeration over {n} variables exceeds the cap of {cap}")]
    ExhaustionCap { n: usize, cap: usize },

    #[error("state vector is not normalised (norm {0})")]
    Unnormalized(f64),

    #[error("branch-and-bound requires {required} BF-DCQO runs, budget is {budget}")]
    RunBudget { required: usize, budget: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl Error {
    /// True for errors caused by a size cap or run budget rather than bad input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::QubitCap { .. } | Error::ExhaustionCap { .. } | Error::RunBudget { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
