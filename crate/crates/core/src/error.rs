use std::path::PathBuf;

/// Errors produced by the library and the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid disk parameter: |a| = {modulus} (must be below 1 - 1e-12)")]
    ParameterOutsideDisk { modulus: f64 },

    #[error("grid mismatch: {left} vs {right} samples")]
    GridMismatch { left: usize, right: usize },

    #[error("grid of {grid} points too small: need at least {required}")]
    GridTooSmall { grid: usize, required: usize },

    #[error("degree {degree} too large for grid {grid} (need grid >= 4 * degree + 4)")]
    DegreeTooLarge { degree: usize, grid: usize },

    #[error("order {order} exceeds coefficient degree {degree}")]
    OrderExceedsDegree { order: usize, degree: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid modulus of continuity: {0}")]
    InvalidModulus(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "minimax exchange did not converge after {iterations} iterations \
         (error bracket [{lower:.6e}, {upper:.6e}])"
    )]
    ExchangeNotConverged {
        lower: f64,
        upper: f64,
        iterations: usize,
    },

    #[error("certification of `{name}` failed: {reason}")]
    Certification { name: String, reason: String },

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
