use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A state specification that names no physical state (wrong parity,
    /// photon number out of range, negative coherent amplitude...).
    #[error("invalid state specification: {0}")]
    InvalidSpec(String),

    /// The requested state has no phase information at all.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed external input, e.g. a decoded amplitude array.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Projection onto a fixed total photon number left (almost) nothing.
    #[error("projected component is empty (norm² = {norm_sqr:e})")]
    EmptyComponent { norm_sqr: f64 },

    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },

    #[error(
        "quadrature did not converge: error estimate {error_estimate:e} exceeds {target:e}, \
         worst subinterval [{}, {}]",
        worst_interval.0,
        worst_interval.1
    )]
    NonConvergence {
        error_estimate: f64,
        target: f64,
        worst_interval: (f64, f64),
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
