use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid pulse sequence: {0}")]
    InvalidSequence(String),

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    NotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error(
        "series term {term} diverges at the lower limit \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    Divergent {
        term: usize,
        estimate: f64,
        error_bound: f64,
    },

    #[error(
        "jitter rejection cap of {cap} draws exceeded at tau = {tau} with sigma = {sigma}; \
         use a smaller sigma or a larger tau"
    )]
    ResampleCapExceeded { cap: u32, sigma: f64, tau: f64 },

    #[error("at tau = {tau}, realization {index}: {source}")]
    Realization {
        tau: f64,
        index: u64,
        source: Box<Error>,
    },

    #[error("at tau = {tau}, ideal signal: {source}")]
    IdealPoint { tau: f64, source: Box<Error> },

    #[error("empty sweep: at least one plan is required")]
    EmptySweep,
}
