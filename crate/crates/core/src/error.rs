use thiserror::Error;

/// Errors raised by the distribution, reliability and process routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tolerance not met after {subdivisions} subdivisions: estimate {estimate:e}, error {error:e}")]
    ToleranceNotMet {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("thinning majorant exceeded at ({x}, {y}): intensity {intensity:e} > bound {bound:e}")]
    ThinningBoundExceeded {
        x: f64,
        y: f64,
        intensity: f64,
        bound: f64,
    },

    #[error("grid point {index}: {source}")]
    AtGridIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
