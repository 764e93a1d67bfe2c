use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants line up with the CLI exit codes: configuration problems map
/// to 2, numerical failures to 3, and violated preconditions to 4.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration file could not be parsed or failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// The discretisation was asked to run outside its stability envelope.
    #[error("stability guard violated: {0}")]
    Stability(String),

    /// An iteration exhausted its budget.
    #[error("no convergence after {iterations} iterations (last defect {defect:e}): {context}")]
    NonConvergence {
        context: String,
        iterations: usize,
        defect: f64,
    },

    /// The scheme produced a state that violates a model invariant.
    #[error("scheme failure: {0}")]
    Scheme(String),

    /// The operation's mathematical preconditions do not hold for these inputs.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            Error::Stability(_)
            | Error::NonConvergence { .. }
            | Error::Scheme(_)
            | Error::Internal(_) => 3,
            Error::Domain(_) | Error::Precondition(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
