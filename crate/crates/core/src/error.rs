use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("invalid reduction indices: {0}")]
    InvalidReduction(String),

    #[error("smoothness parameter alpha must exceed 1, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid generating vector: {0}")]
    InvalidVector(String),

    /// An enumeration oracle was asked for a problem larger than it allows.
    #[error("feasibility guard exceeded: {0}")]
    Guard(String),
}
