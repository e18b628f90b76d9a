use thiserror::Error;

/// Errors produced by the metric, mistake, synthesis, optimizer and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("score set is empty")]
    Empty,

    #[error("length mismatch: {expected} scores but {found} {what}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("score {value} at index {index} is outside the open interval (0, 1)")]
    ScoreOutOfRange { index: usize, value: f64 },

    #[error("metric undefined: no positive samples")]
    NoPositives,

    #[error("metric undefined: no negative samples")]
    NoNegatives,

    #[error("samples {first} and {second} share the score {score}")]
    TiedScores {
        first: usize,
        second: usize,
        score: f64,
    },

    #[error("mistake at ascending position {0} is no longer an adjacent (1, 0) pair")]
    StaleMistake(usize),

    #[error("no incorrectly ranked adjacent pairs")]
    NoMistakes,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("statistic undefined: {0}")]
    Undefined(String),

    #[error("cannot rescale scores: {0}")]
    Rescale(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("missing column(s): {}", .0.join(", "))]
    MissingColumns(Vec<String>),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("config has {} problem(s):\n  {}", .0.len(), .0.join("\n  "))]
    Schema(Vec<String>),
}

impl Error {
    /// True when the error means a metric or statistic has no value for the
    /// input (as opposed to the input being malformed).
    pub fn is_undefined_metric(&self) -> bool {
        matches!(
            self,
            Error::NoPositives | Error::NoNegatives | Error::Undefined(_) | Error::NoMistakes
        )
    }
}

impl Error {
    /// True for configuration and schema errors.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidConfig(_) | Error::Schema(_))
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
