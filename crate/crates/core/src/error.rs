use thiserror::Error;

use crate::complex::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("{what} has size {got}, above the cap of {cap}{hint}")]
    Size { what: String, got: usize, cap: usize, hint: String },

    #[error("[{stage}] hypothesis violated: {clause} (at {witness})")]
    Hypothesis { stage: String, clause: String, witness: Site },

    #[error("gluing conflict at {witness}: {detail}")]
    Conflict { witness: Site, detail: String },

    #[error("no real roots: negative discriminant at {witness}")]
    NoRealRoots { witness: Site },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn hypothesis(stage: &str, clause: impl Into<String>, witness: Site) -> Self {
        Error::Hypothesis { stage: stage.to_string(), clause: clause.into(), witness }
    }

    /// Prefixes the stage of a hypothesis violation raised by a sub-step.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::Hypothesis { stage: inner, clause, witness } => Error::Hypothesis {
                stage: format!("{stage}/{inner}"),
                clause,
                witness,
            },
            other => other,
        }
    }
}
