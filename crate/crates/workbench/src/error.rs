use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Schema(String),

    #[error("invalid field `{field}`: {reason}")]
    Field { field: String, reason: String },

    #[error(transparent)]
    Model(#[from] riscap_core::Error),

    #[error("unknown preset `{0}` (expected one of fig2, fig3, fig4, fig5, fig6, fig7, fig8)")]
    UnknownPreset(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Field {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status: 3 for numerical failures, 2 for rejected input, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Model(e) if e.is_numerical() => 3,
            Error::Io { .. } => 1,
            _ => 2,
        }
    }
}
