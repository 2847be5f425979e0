use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CultureError {
    #[error("agents have different feature counts ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("topology has {found} positions but {expected} agents were requested")]
    TopologyMismatch { expected: usize, found: usize },
    #[error("trait {value} out of range for q = {q}")]
    TraitOutOfRange { value: u32, q: u32 },
    #[error("series of length {0} is too short to classify (need at least 4)")]
    SeriesTooShort(usize),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("parse failure: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CultureError>;

impl From<serde_json::Error> for CultureError {
    fn from(e: serde_json::Error) -> Self {
        CultureError::Parse(e.to_string())
    }
}

impl From<csv::Error> for CultureError {
    fn from(e: csv::Error) -> Self {
        CultureError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CultureError {
    fn from(e: std::io::Error) -> Self {
        CultureError::Io(e.to_string())
    }
}
