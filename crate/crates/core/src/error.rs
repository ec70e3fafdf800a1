use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lambda = {lambda} is outside the MGF domain of {distribution}")]
    OutsideDomain { lambda: f64, distribution: String },

    #[error("incomplete gamma undefined for a = {a}, x = {x}")]
    GammaDomain { a: f64, x: f64 },

    #[error("cannot parse distribution `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),

    #[error("non-finite state at t = {0}")]
    NonFinite(f64),

    #[error("negative cohort mass {mass} at t = {t}")]
    NegativeMass { t: f64, mass: f64 },

    #[error("distribution means differ ({a} vs {b}); comparison requires equal means")]
    MeanMismatch { a: f64, b: f64 },

    #[error("time grids differ: {0}")]
    GridMismatch(String),

    #[error("reciprocal state z crossed zero at t = {0}")]
    ZeroCrossing(f64),

    #[error("closed-form solution is singular at t = {t} (denominator {denominator})")]
    Singular { t: f64, denominator: f64 },

    #[error("{0}")]
    NotApplicable(String),

    #[error("continued fraction failed to converge for a = {a}, x = {x}")]
    NoConvergence { a: f64, x: f64 },

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
