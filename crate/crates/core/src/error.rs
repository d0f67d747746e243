use thiserror::Error;

/// Errors produced across the library.
///
/// Every variant maps to a stable kebab-case code (see [`Error::code`]) that the
/// command-line front end forwards in its machine-readable error records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty text: the empty string is not accepted")]
    EmptyText,

    #[error("position {pos} is outside [1..{n}]")]
    PositionOutOfRange { pos: usize, n: usize },

    #[error("interval [{start}..{end}] is not a valid interval of [1..{n}]")]
    IntervalOutOfRange { start: usize, end: usize, n: usize },

    #[error("input of size {size} exceeds the limit {limit}")]
    InputTooLarge { size: usize, limit: usize },

    #[error("invalid grammar: {0}")]
    GrammarInvalid(String),

    #[error("position {0} is not covered by any directive")]
    UncoveredPosition(usize),

    #[error("position {0} can never be resolved (copy cycle)")]
    UnresolvableCycle(usize),

    #[error("directives disagree at position {0}")]
    InconsistentDirectives(usize),

    #[error("not a string attractor: {0}")]
    InvalidAttractor(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("range [{pos}, +{len}) is outside a text of length {n}")]
    RangeOutOfBounds { pos: usize, len: usize, n: usize },

    #[error("edge {0} does not belong to the tree")]
    EdgeNotInTree(usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("the set-cover universe is empty")]
    EmptyUniverse,

    #[error("invalid set-cover instance: {0}")]
    InvalidSetCover(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyText => "empty-text",
            Error::PositionOutOfRange { .. } => "position-out-of-range",
            Error::IntervalOutOfRange { .. } => "interval-out-of-range",
            Error::InputTooLarge { .. } => "input-too-large",
            Error::GrammarInvalid(_) => "grammar-invalid",
            Error::UncoveredPosition(_) => "uncovered-position",
            Error::UnresolvableCycle(_) => "unresolvable-cycle",
            Error::InconsistentDirectives(_) => "inconsistent-directives",
            Error::InvalidAttractor(_) => "invalid-attractor",
            Error::ParameterOutOfRange(_) => "parameter-out-of-range",
            Error::RangeOutOfBounds { .. } => "range-out-of-bounds",
            Error::EdgeNotInTree(_) => "edge-not-in-tree",
            Error::InvalidTree(_) => "invalid-tree",
            Error::EmptyUniverse => "empty-universe",
            Error::InvalidSetCover(_) => "invalid-set-cover",
            Error::Format(_) => "malformed-input",
            Error::Internal(_) => "internal",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
