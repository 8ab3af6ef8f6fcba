use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {field}: {detail}")]
    Usage { field: String, detail: String },

    #[error("self-test failed: {0} check(s) did not pass")]
    SelfTest(usize),

    #[error(transparent)]
    Core(#[from] ssop_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(field: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError::Usage {
            field: field.into(),
            detail: detail.into(),
        }
    }

    /// Process exit status: 1 usage, 2 numerical failure, 3 self-test failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Core(ssop_core::Error::Argument { .. }) => 1,
            CliError::Core(_) => 2,
            CliError::SelfTest(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
