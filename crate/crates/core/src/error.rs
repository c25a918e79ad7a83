use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested state vanishes identically for these parameters.
    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("quantum number {found} exceeds the supported bound {bound}")]
    OutOfRange { found: usize, bound: usize },

    #[error("gram system is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("quadrature did not converge: doubling nodes changed an entry by {change:.3e}")]
    Convergence { change: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
