//! Crate-wide error type.

/// Errors reported by automaton construction, parsing, and analysis.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An operand lies outside the admissible carrier of a semiring.
    #[error("operand {value} is outside the carrier of the {semiring} semiring")]
    RejectedOperand { semiring: &'static str, value: String },

    /// Finite counts overflowed during an operation.
    #[error("count overflow while computing {op}")]
    CountOverflow { op: &'static str },

    /// Two multisets over different feature alphabets were combined.
    #[error("feature alphabets differ: [{left}] vs [{right}]")]
    AlphabetMismatch { left: String, right: String },

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("duplicate transition {from} --{symbol}--> {to}")]
    DuplicateTransition {
        from: String,
        symbol: String,
        to: String,
    },

    /// A path refers to a transition the automaton does not have.
    #[error("invalid path: {0}")]
    InvalidPath(String),

    /// A weight does not fit the automaton's weight domain.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// A configuration is rejected before an analysis starts.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// An operation is undefined for the given semiring.
    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Text-format parse error with the offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

/// Shorthand for text-format parsers.
pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Error {
    Error::parse(line, msg)
}
