use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors surfaced by the engine, the indexes, and the stream codecs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("EmptyVector: no strictly positive coordinate")]
    EmptyVector,

    #[error("NegativeCoordinate: dimension {dim} carries a negative value")]
    NegativeCoordinate { dim: u32 },

    #[error("NonFiniteCoordinate: dimension {dim} carries a non-finite value")]
    NonFiniteCoordinate { dim: u32 },

    #[error("InvalidThreshold: theta must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),

    #[error("InvalidDecay: lambda must be strictly positive, got {0}")]
    InvalidDecay(f64),

    #[error("NegativeDelta: time delta must be non-negative, got {0}")]
    NegativeDelta(f64),

    #[error("OutOfOrderStream: item {id} at t={timestamp} precedes the stream tail t={tail}")]
    OutOfOrderStream { id: u64, timestamp: f64, tail: f64 },

    #[error("WrongOrderMode: backward truncation requires a time-ordered posting list")]
    WrongOrderMode,

    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),

    #[error("ParseError: line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("FormatError: {0}")]
    Format(String),

    #[error("TruncatedFile: {0}")]
    TruncatedFile(String),

    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyVector => "EmptyVector",
            Error::NegativeCoordinate { .. } => "NegativeCoordinate",
            Error::NonFiniteCoordinate { .. } => "NonFiniteCoordinate",
            Error::InvalidThreshold(_) => "InvalidThreshold",
            Error::InvalidDecay(_) => "InvalidDecay",
            Error::NegativeDelta(_) => "NegativeDelta",
            Error::OutOfOrderStream { .. } => "OutOfOrderStream",
            Error::WrongOrderMode => "WrongOrderMode",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::Parse { .. } => "ParseError",
            Error::Format(_) => "FormatError",
            Error::TruncatedFile(_) => "TruncatedFile",
            Error::Io(_) => "Io",
        }
    }
}
