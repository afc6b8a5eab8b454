use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} = {value} is outside {domain}")]
    Range {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("weight is singular at t = {t} (exponent {exponent})")]
    SingularPoint { t: f64, exponent: f64 },

    #[error("basis mismatch: {0}")]
    Usage(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("under-resolved: {0}")]
    UnderResolved(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// Mass matrix could not be factored.
    #[error("mass matrix is not positive definite (smallest eigenvalue {smallest_eigenvalue:e})")]
    Conditioning { smallest_eigenvalue: f64 },

    #[error(
        "ambiguous trivial eigenpair `{target}`: best M-angle {angle:e} exceeds {threshold:e}"
    )]
    AmbiguousTrivial {
        target: &'static str,
        angle: f64,
        threshold: f64,
    },
}
