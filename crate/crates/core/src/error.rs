use crate::specfn::SpecialError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid power split: {0}")]
    InvalidSplit(String),
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("invalid search spec: {0}")]
    InvalidSearch(String),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("non-finite value for {0}")]
    NonFinite(String),
    #[error("config too large: per-trial codebook footprint {footprint} bytes exceeds budget {budget} bytes")]
    ConfigTooLarge { footprint: u128, budget: u128 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

impl Error {
    /// Stable variant name used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidSplit(_) => "InvalidSplit",
            Error::InvalidThresholds(_) => "InvalidThresholds",
            Error::InvalidSearch(_) => "InvalidSearch",
            Error::DegenerateSplit(_) => "DegenerateSplit",
            Error::NonFinite(_) => "NonFinite",
            Error::ConfigTooLarge { .. } => "ConfigTooLarge",
            Error::Special(_) => "SpecialFunction",
        }
    }

    /// True for errors caused by malformed input rather than evaluation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::InvalidSplit(_) | Error::InvalidThresholds(_) | Error::InvalidSearch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
