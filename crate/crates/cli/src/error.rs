use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("time limit of {0} s exceeded")]
    Timeout(f64),
    #[error("{0} bound violation(s) in suite {1}")]
    Violations(usize, String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// Process exit code: 2 infeasible or failed check, 3 bad input, 4 cap or
    /// time limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) | CliError::Verify(_) | CliError::Violations(..) => 2,
            CliError::Input(_) | CliError::Io { .. } => 3,
            CliError::Cap(_) | CliError::Timeout(_) => 4,
        }
    }
}

impl From<famcover::Error> for CliError {
    fn from(e: famcover::Error) -> Self {
        match e {
            famcover::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
