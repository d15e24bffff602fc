use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical operations and the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("evaluation failed at {point}: {reason}")]
    Evaluation { point: String, reason: String },

    #[error("integration failed at node {node:?}: {source}")]
    Integration {
        node: Vec<usize>,
        source: Box<Error>,
    },

    #[error("aliasing on axis {axis}: {nodes} nodes, at least {required} required")]
    Aliasing {
        axis: usize,
        nodes: usize,
        required: usize,
    },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no admissible disc for the extension; blocked: {}", blocked.join("; "))]
    ExtensionFailed { blocked: Vec<String> },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("degree cap {cap} reached with tail estimate {tail:e}")]
    DegreeCap { cap: usize, tail: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) | Error::DegreeCap { .. } => 3,
            Error::Integration { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("json: {e}"))
    }
}
