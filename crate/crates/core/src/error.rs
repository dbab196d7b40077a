use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A grid or parameter bundle violates an operation's precondition.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("size mismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The lattice cannot resolve the requested support or window.
    #[error("resolution error: {what}; required grid: {required}")]
    Resolution { what: String, required: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("fixed-point iteration diverged after {iterations} iterations (last difference {last:.3e})")]
    Divergence { iterations: usize, last: f64, history: Vec<f64> },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
