use thiserror::Error;

/// Errors raised by the geometry, quadrature and prior machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("quadrature did not converge (last estimate {estimate}, previous {previous})")]
    QuadratureFailure { estimate: f64, previous: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "volume element of `{id}` is not normalizable (partial volume {partial} at r = {cutoff})"
    )]
    NonNormalizable {
        id: String,
        partial: f64,
        cutoff: f64,
    },

    #[error("divergent integrand near r = {locus}: {what}")]
    Divergent { what: String, locus: f64 },

    #[error("metric `{id}` does not have constant scalar curvature (spread {spread})")]
    NotConstantCurvature { id: String, spread: f64 },

    #[error("unknown identifier `{0}`")]
    UnknownId(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
