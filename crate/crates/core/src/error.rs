use thiserror::Error;

/// Errors raised by the evaluators and the algebra layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
    #[error("jet has order {have}, polynomial needs order {need}")]
    InsufficientJet { have: usize, need: usize },
    #[error("singularity guard tripped: {0}")]
    Singularity(String),
    #[error("series does not converge: {0}")]
    Divergence(String),
    #[error("point {0} lies outside the sector |arg z| <= 5*pi/6")]
    Sector(String),
    #[error("unsupported parameter regime: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-friendly name of the guard or condition that failed.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::NonFinite(_) => "non-finite",
            Error::InsufficientJet { .. } => "insufficient-jet",
            Error::Singularity(_) => "singularity",
            Error::Divergence(_) => "divergence",
            Error::Sector(_) => "sector",
            Error::Unsupported(_) => "unsupported",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
