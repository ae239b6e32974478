use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (non-finite values,
    /// non-positive temperatures, violated type invariants).
    #[error("domain error: {0}")]
    Domain(String),

    /// A lookup fell outside the data that was supplied, e.g. an experimental
    /// time beyond the simulated span or an unbracketed ΔT = 50 K.
    #[error("range error: {0}")]
    Range(String),

    /// A field of a configuration document violates an invariant. `path` is the
    /// dotted field path, e.g. `optics.eps_absorber`.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    /// A configuration document could not be parsed.
    #[error("parse error at line {line}, column {column}{}: {message}", fmt_path(.path))]
    Parse {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },

    /// A CSV file could not be read. Rows are 1-based and count the header.
    #[error("row {row}: {message}")]
    Csv { row: u64, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn fmt_path(path: &str) -> String {
    if path.is_empty() || path == "." {
        String::new()
    } else {
        format!(" ({path})")
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input data or configuration, as opposed
    /// to numerical failures during a run.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Invalid { .. } | Error::Parse { .. } | Error::Csv { .. } | Error::Io { .. }
        )
    }
}
