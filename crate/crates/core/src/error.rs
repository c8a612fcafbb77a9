use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input has {len} points, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    /// The estimator is undefined on constant (or all-zero) input.
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("degenerate regressor: transformed input has zero variance")]
    DegenerateRegressor,

    /// A failure inside one direction of the RESIT procedure.
    #[error("direction {direction}: {source}")]
    Direction {
        direction: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// A trial failure tagged with the sweep cell it belongs to.
    #[error("cell {cell}, repetition {repetition}: {source}")]
    Trial {
        cell: String,
        repetition: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}

pub(crate) fn check_min_len(len: usize, min: usize) -> Result<()> {
    if len < min {
        return Err(Error::TooShort { len, min });
    }
    Ok(())
}

pub(crate) fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}
