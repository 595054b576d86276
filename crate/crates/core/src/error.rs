use thiserror::Error;

/// Failure modes shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the requested quantity exists.
    #[error("domain error: {0}")]
    Domain(String),
    /// A closed form is too close to a singular denominator to be trusted.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A semi-trivial family's inequality precondition fails.
    #[error("constraint error: {0}")]
    Constraint(String),
    #[error("stencil error: {0}")]
    Stencil(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// The spectral integrator blew up.
    #[error("stability error: {0}")]
    Stability(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
