// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate design: covariate has no spread among the {n} observations at or above {u}")]
    DegenerateDesign { u: f64, n: usize },

    #[error("insufficient suffix: {available} observations at or above {u}, need at least {required}")]
    InsufficientSuffix { u: f64, available: usize, required: usize },

    #[error("no admissible threshold candidates (cutoff {gamma_n}, minimum suffix {min_suffix})")]
    NoCandidates { gamma_n: f64, min_suffix: usize },

    #[error("{value} is outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("column `{column}` not found in {path}")]
    MissingColumn { path: PathBuf, column: String },

    #[error("cannot parse row {row}, column `{column}`: {value:?}")]
    Parse { row: usize, column: String, value: String },

    #[error("only {rows} complete rows in {path}, need at least {required}")]
    TooFewRows {
        path: PathBuf,
        rows: usize,
        required: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
}

impl Error {
    /// Stable machine-readable identifier, shared by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSample(_) => "E_INVALID_SAMPLE",
            Error::InvalidConfig(_) => "E_INVALID_CONFIG",
            Error::DegenerateDesign { .. } => "E_DEGENERATE_DESIGN",
            Error::InsufficientSuffix { .. } => "E_INSUFFICIENT_SUFFIX",
            Error::NoCandidates { .. } => "E_NO_CANDIDATES",
            Error::Domain { .. } => "E_DOMAIN",
            Error::MissingColumn { .. } => "E_MISSING_COLUMN",
            Error::Parse { .. } => "E_PARSE",
            Error::TooFewRows { .. } => "E_TOO_FEW_ROWS",
            Error::Io { .. } => "E_IO",
            Error::Csv { .. } => "E_CSV",
            Error::Config { .. } => "E_CONFIG_FILE",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
