use std::path::PathBuf;

use thiserror::Error;

use crate::lp::LpError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {msg}")]
    Parse { file: PathBuf, line: usize, msg: String },
    #[error("{file}: {msg}")]
    Schema { file: PathBuf, msg: String },
    #[error("scenario is invalid:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("{0}")]
    Domain(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("grid: {0}")]
    Grid(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("no feasible supply: {0}")]
    Structural(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that originate in the solver rather than the data.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Lp(_) | Error::Infeasible(_))
    }
}
