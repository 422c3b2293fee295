use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto process exit codes:
/// configuration problems exit 2, quadrature non-convergence exits 3,
/// sampling failures exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("catalog error at line {line}: {msg}")]
    Catalog { line: usize, msg: String },

    #[error("invalid {what}: {msg}")]
    Domain { what: &'static str, msg: String },

    #[error("quadrature did not converge: estimated relative error {est:.3e} exceeds {tol:.3e}")]
    NonConvergence { est: f64, tol: f64 },

    #[error("sampling failure: {0}")]
    Sampling(String),

    #[error("event record error at line {line}: {msg}")]
    EventRecord { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            what,
            msg: msg.into(),
        }
    }

    /// Process exit code the CLI assigns to this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Catalog { .. } | Error::Domain { .. } => 2,
            Error::NonConvergence { .. } => 3,
            Error::Sampling(_) => 4,
            Error::EventRecord { .. } => 2,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
