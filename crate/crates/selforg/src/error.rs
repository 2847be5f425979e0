use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelforgError {
    #[error("event {event} refers to unknown or later event {parent}")]
    UnknownParent { event: u64, parent: u64 },
    #[error("event {event}: {subscriber} cannot follow up their own post")]
    SelfFollowup { event: u64, subscriber: String },
    #[error("event {0} needs a parent")]
    MissingParent(u64),
    #[error("event {0} is an initiation and cannot have a parent")]
    UnexpectedParent(u64),
    #[error("event {event} cannot reply to event {parent} of that kind")]
    InvalidParent { event: u64, parent: u64 },
    #[error("event index {0} used twice")]
    DuplicateEvent(u64),
    #[error("thread `{0}` is not mapped to an interest")]
    UnmappedThread(String),
    #[error("interest `{0}` is not declared")]
    UnknownInterest(String),
    #[error("group `{0}` has no members")]
    EmptyGroup(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("manager fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("need between 2 and 20 interests, got {0}")]
    InvalidInterestCount(usize),
    #[error("trait vector does not encode a weak order: {0}")]
    NotAnOrder(String),
    #[error("parse failure: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] preflattice_core::Error),
    #[error(transparent)]
    Culture(#[from] preflattice_culture::CultureError),
}

pub type Result<T> = std::result::Result<T, SelforgError>;

impl From<serde_json::Error> for SelforgError {
    fn from(e: serde_json::Error) -> Self {
        SelforgError::Parse(e.to_string())
    }
}

impl From<csv::Error> for SelforgError {
    fn from(e: csv::Error) -> Self {
        SelforgError::Parse(e.to_string())
    }
}
