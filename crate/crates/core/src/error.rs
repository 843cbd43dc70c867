use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unknown variant `{0}` (expected HVRPFD, HVRPD, FSMFD, FSMF or FSMD)")]
    UnknownVariant(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no feasible solution found after {attempts} construction attempts")]
    Infeasible { attempts: usize },

    #[error("perturbation failed to yield a feasible solution {retries} times in a row at iteration {iteration}")]
    Stalled { iteration: usize, retries: usize },

    #[error("instance too large for exhaustive search: {n} customers (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("gap undefined for non-positive best-known value {0}")]
    Domain(f64),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }
}
