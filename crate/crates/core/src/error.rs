use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Gamma function or Pochhammer denominator hits a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// A series that must converge does not (the convergence condition fails).
    #[error("divergent series: {0}")]
    Divergence(String),

    /// An iterative procedure hit its cap before meeting its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A function meant for a special parameter value was called outside it.
    #[error("misuse: {0}")]
    Misuse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Pole(_) | Error::Misuse(_) => 2,
            Error::Divergence(_) => 3,
            Error::NonConvergence(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
