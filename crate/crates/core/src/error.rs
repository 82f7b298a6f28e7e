use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature did not reach the requested tolerance. `value` is the best
    /// available estimate.
    #[error("quadrature did not converge: value {value:e}, error estimate {err_est:e}")]
    Convergence { value: f64, err_est: f64 },

    #[error("no sign change found in ({start}, {horizon}]")]
    NotFound { start: f64, horizon: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The Fresnel sampling criterion is violated for the chosen method.
    #[error("aliasing: {reason}; a grid of n = {required_n} samples per axis is needed")]
    Aliasing { reason: String, required_n: usize },

    #[error("under-sampled: {0}")]
    Sampling(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validity check `{name}` failed: {value:.6e} against threshold {threshold:.3e}")]
    Validity {
        name: String,
        value: f64,
        threshold: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
