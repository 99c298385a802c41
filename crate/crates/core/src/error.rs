use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point x = {x} lies outside [0, {b}]")]
    Domain { x: f64, b: f64 },

    #[error("value out of representable range: {0}")]
    Range(String),

    /// The argument-principle integral did not land near an integer, or the
    /// contour passed through (or very near) a zero.
    #[error("contour too close to a zero of the characteristic function ({detail})")]
    ContourTooClose { detail: String },

    #[error("zero refinement did not converge in box [{re_min}, {re_max}] x [{im_min}, {im_max}]")]
    NonConvergence {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },

    #[error("resolvent is singular at lambda = {lambda} (|Delta| = {delta_abs:e}, nearest eigenvalue {nearest:?})")]
    SingularResolvent {
        lambda: Complex64,
        delta_abs: f64,
        nearest: Option<Complex64>,
    },

    #[error("invalid eigenvalue data: {0}")]
    InvalidEigenvalue(String),

    #[error("coefficient convention could not be resolved: {0}")]
    Convention(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Range(_)
                | Error::ContourTooClose { .. }
                | Error::NonConvergence { .. }
                | Error::SingularResolvent { .. }
                | Error::InvalidEigenvalue(_)
                | Error::Convention(_)
        )
    }
}
