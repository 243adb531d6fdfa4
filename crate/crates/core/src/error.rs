use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    #[error("derivative order {requested} unsupported (max_order = {max})")]
    UnsupportedOrder { requested: usize, max: usize },

    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    #[error("unknown target `{name}` (registered: {})", known.join(", "))]
    UnknownTarget { name: String, known: Vec<String> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid network: {0}")]
    Validation(String),

    #[error("singular interpolation system (condition estimate {condition:e})")]
    Singular { condition: f64 },
}
