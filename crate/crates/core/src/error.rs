use thiserror::Error;

/// Errors raised by mesh construction, discretization and the run driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("point {0:?} lies outside the reference element")]
    OutsideReference(Vec<f64>),

    #[error("invalid state{}: {reason}", cell.map(|c| format!(" in cell {c}")).unwrap_or_default())]
    InvalidState { cell: Option<usize>, reason: String },

    #[error("no ghost rule registered for boundary tag {0:?}")]
    MissingGhostRule(crate::mesh::BoundaryTag),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown benchmark '{0}'")]
    UnknownBenchmark(String),

    #[error("exact solution unavailable: {0}")]
    ExactUnavailable(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("singular matrix in {0}")]
    Singular(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidState {
            cell: None,
            reason: reason.into(),
        }
    }

    /// Attaches a cell id to an invalid-state error that does not carry one yet.
    pub fn in_cell(self, id: usize) -> Self {
        match self {
            Error::InvalidState { cell: None, reason } => Error::InvalidState {
                cell: Some(id),
                reason,
            },
            other => other,
        }
    }

    /// True for failures caused by the numerics (NaN, negative density, ...).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::InvalidState { .. } | Error::NoConvergence(_) | Error::Singular(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
