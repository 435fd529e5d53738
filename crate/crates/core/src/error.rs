use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the interval where a special function is supported.
    #[error("argument {value} outside supported interval [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    Validation(String),

    /// Caller violated a precondition (size mismatch, missing orders, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("newton iteration did not converge at mu = {mu} (last residual {residual:e})")]
    Convergence { mu: f64, residual: f64 },

    #[error("degenerate boundary-condition determinant {det:e}")]
    DegenerateBasis { det: f64 },

    #[error("profile is neither type A nor type B: {0}")]
    Classification(String),

    #[error("non-positive cube-root argument {arg:e} in interval conversion")]
    InvalidConversion { arg: f64 },
}

impl Error {
    /// Short stable tag, used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Validation(_) => "validation",
            Error::Contract(_) => "contract",
            Error::Convergence { .. } => "convergence",
            Error::DegenerateBasis { .. } => "degenerate_basis",
            Error::Classification(_) => "classification",
            Error::InvalidConversion { .. } => "invalid_conversion",
        }
    }
}
