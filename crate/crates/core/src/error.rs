use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("label `{0}` is not ranked")]
    MissingLabel(String),
    #[error("label `{0}` is not a known policy")]
    UnknownLabel(String),
    #[error("empty tie-group")]
    EmptyGroup,
    #[error("policy set is empty")]
    EmptyPolicySet,
    #[error("profile has no voters")]
    NoVoters,
    #[error("voter `{0}` ranks a different policy set")]
    ForeignPolicySet(String),
    #[error("number of policies must be at least 1")]
    ZeroPolicies,
    #[error("enumeration over {requested} vertices exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("pair `{0}`-`{1}` is both directed and undirected")]
    OverlappingEdge(String, String),
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("matrix is not square or has negative entries: {0}")]
    InvalidMatrix(String),
    #[error("matrix is not row-stochastic (row {0})")]
    NotStochastic(usize),
    #[error("power iteration did not converge: estimate {estimate}, residual {residual:e}")]
    NonConvergence { estimate: f64, residual: f64 },
    #[error("not a probability distribution (sum {0})")]
    NotADistribution(f64),
    #[error("position counts require strong orders (voter `{0}` has ties)")]
    WeakOrderUnsupported(String),
    #[error("comparison of `{0}` with itself")]
    SelfComparison(String),
    #[error("estimates and tally cover different pairs")]
    MismatchedPairs,
    #[error("invalid input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
