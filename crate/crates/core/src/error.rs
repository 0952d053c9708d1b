use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DuplicatePoints: points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("Collinear: configuration has no three non-collinear points")]
    Collinear,
    #[error("BadStep: step {0} is not of the form 1/q for an integer q")]
    BadStep(f64),
    #[error("OffGridShift: shift {0} is not a multiple of the grid step and the window has no generator")]
    OffGridShift(f64),
    #[error("GridMismatch: {0}")]
    GridMismatch(String),
    #[error("NoDistinguishedPoint: configuration has no distinguished point")]
    NoDistinguishedPoint,
    #[error("UnsupportedShift: {0}")]
    UnsupportedShift(String),
    #[error("ZeroDirection: toral line direction must be nonzero")]
    ZeroDirection,
    #[error("PrecisionExhausted: candidate relation verifies at 10*tol but not at tol (residual {residual:e}, tol {tol:e})")]
    PrecisionExhausted { residual: f64, tol: f64 },
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Name of the error case, as printed by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DuplicatePoints(..) => "DuplicatePoints",
            Error::Collinear => "Collinear",
            Error::BadStep(_) => "BadStep",
            Error::OffGridShift(_) => "OffGridShift",
            Error::GridMismatch(_) => "GridMismatch",
            Error::NoDistinguishedPoint => "NoDistinguishedPoint",
            Error::UnsupportedShift(_) => "UnsupportedShift",
            Error::ZeroDirection => "ZeroDirection",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
