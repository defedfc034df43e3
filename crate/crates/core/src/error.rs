use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid variogram: {0}")]
    InvalidVariogram(String),

    #[error("invalid well template: {0}")]
    InvalidTemplate(String),

    #[error("invalid porosity class: {0}")]
    InvalidClass(String),

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("need at least {needed} active cells, found {found}")]
    TooFewCells { needed: usize, found: usize },

    #[error("degenerate classes: quartiles {q1} and {q3} leave a zero-width interval")]
    DegenerateClasses { q1: f64, q3: f64 },

    #[error("grid shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("cell ({x}, {y}, {z}) lies outside a {nx}x{ny}x{nz} grid")]
    OutOfBounds {
        x: i64,
        y: i64,
        z: i64,
        nx: usize,
        ny: usize,
        nz: usize,
    },

    #[error("template spanning {span_x}x{span_y} columns does not fit a {nx}x{ny} grid")]
    TemplateTooLarge {
        span_x: usize,
        span_y: usize,
        nx: usize,
        ny: usize,
    },

    #[error("empty global cdf")]
    EmptyCdf,

    #[error("conditioning value {value} lies outside the global cdf support [{min}, {max}]")]
    OutsideSupport { value: f64, min: f64, max: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("empty class in reality")]
    EmptyClassInReality,

    #[error("no evidence mass")]
    NoEvidenceMass,

    #[error("undefined normalization: real proportion is zero")]
    UndefinedNormalization,

    #[error("coefficient r must be positive, got {0}")]
    InvalidCoefficient(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("stage {0} incomplete")]
    MissingStage(String),

    #[error("{failed} of {total} jobs failed")]
    JobsFailed { failed: usize, total: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
