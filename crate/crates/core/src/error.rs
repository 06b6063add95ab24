use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the identification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image has zero width or height")]
    EmptyImage,

    #[error("filter window must be odd and >= 3, got {0}")]
    BadWindow(usize),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("signature has only {ink} ink pixels after binarization (need at least {required})")]
    EmptySignature { ink: usize, required: usize },

    #[error("image has no ink pixels")]
    NoInk,

    #[error("subject `{0}` has no templates")]
    NoTemplates(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is not positive definite")]
    SingularCovariance,

    #[error("training set needs at least one sample of each label")]
    DegenerateTrainingSet,

    #[error("feature schema mismatch: gallery uses `{expected}`, query uses `{found}`")]
    SchemaMismatch { expected: String, found: String },

    #[error("unknown subject `{0}`")]
    UnknownSubject(String),

    #[error("no trials to evaluate")]
    EmptyTrials,

    #[error("invalid image file {path}: {msg}")]
    ImageFormat { path: PathBuf, msg: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} at line {line}, column {column}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("{kind} file has schema version {found}, this build reads version {expected}")]
    SchemaVersionMismatch {
        kind: String,
        found: u32,
        expected: u32,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
