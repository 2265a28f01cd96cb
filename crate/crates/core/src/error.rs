use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model, rate or weight parameter violates its admissible range.
    #[error("parameter out of range at {path}: {value} ({reason})")]
    ParamOutOfRange {
        path: String,
        value: f64,
        reason: &'static str,
    },

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("time grid must be strictly increasing, finite and non-negative (index {index}, value {value})")]
    NonMonotoneGrid { index: usize, value: f64 },

    #[error("at least two team profiles are required, got {0}")]
    FewerThanTwoProfiles(usize),

    #[error("at least two Monte Carlo samples are required, got {0}")]
    InsufficientSamples(u64),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
}

impl Error {
    pub(crate) fn param(path: impl Into<String>, value: f64, reason: &'static str) -> Self {
        Error::ParamOutOfRange {
            path: path.into(),
            value,
            reason,
        }
    }

    pub(crate) fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Prefixes the location of a path-qualified error with `prefix`.
    pub(crate) fn under(self, prefix: &str) -> Self {
        let join = |p: String| {
            if p.is_empty() {
                prefix.to_string()
            } else {
                format!("{prefix}.{p}")
            }
        };
        match self {
            Error::ParamOutOfRange {
                path,
                value,
                reason,
            } => Error::ParamOutOfRange {
                path: join(path),
                value,
                reason,
            },
            Error::Schema { path, reason } => Error::Schema {
                path: join(path),
                reason,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
