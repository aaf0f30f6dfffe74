use thiserror::Error;

/// Errors raised by estimation, fitting and testing routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {value} is outside the domain of the {family} family ({domain})")]
    ParameterDomain {
        family: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Kendall's tau {tau} is not attainable by the {family} family")]
    InversionRange { family: &'static str, tau: f64 },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("point ({u}, {v}) lies on the boundary of the unit square")]
    Boundary { u: f64, v: f64 },

    #[error("bandwidth {0} is outside the admissible range")]
    Bandwidth(f64),

    #[error("local-linear kernel is degenerate at u = {u}, h = {h}")]
    DegenerateKernel { u: f64, h: f64 },

    #[error("reference distribution is near-singular (|tau| = {0})")]
    NearSingular(f64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
