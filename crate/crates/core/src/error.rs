use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("net `{0}` has more than one driver")]
    DuplicateDriver(String),
    #[error("net `{0}` is used but never driven")]
    UndefinedNet(String),
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("unsupported gate kind `{0}`")]
    UnsupportedGate(String),
    #[error("gate {kind} driving `{net}` has invalid arity {arity}")]
    InvalidArity {
        kind: String,
        net: String,
        arity: usize,
    },
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error("expected {expected} input bits, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("missing input probability for `{0}`")]
    MissingProbability(String),
    #[error("invalid probability vector <{p0}, {p1}>")]
    InvalidProbability { p0: f64, p1: f64 },
    #[error("{what}: {actual} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("signal universe is empty")]
    EmptyUniverse,
    #[error("constant output `{0}` cannot be expressed as a gate network")]
    ConstantOutput(String),
    #[error("trojan sampling failed: {0}")]
    Sampling(String),
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("{0}")]
    Io(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coarse classification used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Capacity,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Capacity { .. } => ErrorClass::Capacity,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
