use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bbdcqo::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("budgets differ by {percent:.2}% (bbb {bbb}, baseline {baseline}); pass --allow-uneven to compare anyway")]
    UnevenBudget {
        bbb: u64,
        baseline: u64,
        percent: f64,
    },

    #[error("reduction failed verification")]
    VerificationFailed,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 3 when a solver cap or budget was exceeded, 1 for a reduction that
    /// fails its check, 2 for any other failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_cap_exceeded() => 3,
            CliError::VerificationFailed => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
