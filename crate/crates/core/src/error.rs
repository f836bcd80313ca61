use thiserror::Error;

pub type Result<T> = std::result::Result<T, PhaseError>;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error(
        "truncation to dim {dim} captures only {captured:.12} of the state (need >= {required}); \
         raise the dimension or force truncation"
    )]
    Truncation {
        dim: usize,
        captured: f64,
        required: f64,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("integration error: non-finite integrand at node {node}")]
    Integration { node: String },

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl PhaseError {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        PhaseError::Validation(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        PhaseError::Dimension(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        PhaseError::Convergence(msg.into())
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        PhaseError::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        PhaseError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            PhaseError::Validation(_)
            | PhaseError::Dimension(_)
            | PhaseError::Truncation { .. }
            | PhaseError::Parse { .. } => 1,
            PhaseError::Integration { .. } | PhaseError::Convergence(_) => 2,
            PhaseError::Io { .. } => 3,
        }
    }
}
