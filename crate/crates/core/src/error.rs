use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("quadrature order {order} too low for harmonic degree {max_degree} (need order >= {needed})")]
    AliasingRisk {
        order: usize,
        max_degree: usize,
        needed: usize,
    },

    #[error("divergent integral: {message} (partial values {partial:?})")]
    Divergence { message: String, partial: Vec<f64> },

    #[error("offset range exceeded for {fraction:.3} of the direction weight")]
    RangeExceeded { fraction: f64 },

    #[error("epsilon limit did not converge; trace {trace:?}")]
    NoConvergence { trace: Vec<(f64, f64)> },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("ill-conditioned moment fit (condition {condition:.3e}); use a larger direction grid")]
    Fit { condition: f64 },

    #[error("data not in the range of the transform: {0}")]
    NotInRange(String),

    #[error("odd harmonic content {odd_fraction:.3e} exceeds threshold; not a Funk image")]
    NotAFunkImage { odd_fraction: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integrand tail not negligible: {0}")]
    Truncation(String),

    #[error("point too close to the degenerate set: {0}")]
    DegeneratePoint(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Coarse classification used by the command-line driver.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) | Error::Format(_) => ErrorKind::Io,
            Error::Divergence { .. }
            | Error::NoConvergence { .. }
            | Error::Fit { .. }
            | Error::NotInRange(_)
            | Error::NotAFunkImage { .. }
            | Error::Truncation(_)
            | Error::RangeExceeded { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Precondition,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedDimension(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Precondition,
    Numerical,
    Io,
}
