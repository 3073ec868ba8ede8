use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A removable singularity was hit where no limit value is defined.
    #[error("singular point: {0}")]
    Singular(String),
    /// An iterative method failed to converge or lost track of a branch.
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("malformed export data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors caused by invalid inputs rather than numerics or I/O.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Singular(_))
    }
}
