use thiserror::Error;

/// Error type shared by all library modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A circuit element references a mode index outside the register.
    #[error("mode index {index} out of range for {modes}-mode register")]
    ModeIndex { index: usize, modes: usize },

    /// Two collections that must agree in length do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An iterative routine hit its iteration cap before reaching tolerance.
    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { iterations: usize, context: String },

    /// A quadrature routine could not reach the requested tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Binary error correction left residual mismatches after the pass cap.
    #[error("correction failure: {residual} residual errors after {passes} passes")]
    CorrectionFailure { residual: usize, passes: usize },

    /// Conditional probability mass vanished where a decision was required.
    #[error("degenerate conditional distribution: {0}")]
    DegenerateConditional(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A plain-text config line could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
