use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Codec(#[from] regen_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed file: {0}")]
    Format(String),
    #[error("line {line}: {msg}")]
    ScriptInvalid { line: usize, msg: String },
    #[error("{0}")]
    NodeState(String),
    #[error("{0} does not match the original")]
    Mismatch(String),
    #[error("event {index} (line {line}): {source}")]
    Event {
        index: usize,
        line: usize,
        #[source]
        source: Box<HarnessError>,
    },
    #[error("{0}")]
    TrendViolated(String),
}

impl HarnessError {
    /// Stable machine-readable name, printed on the CLI's error line.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Codec(e) => e.kind(),
            HarnessError::Io(_) => "Io",
            HarnessError::Format(_) => "MalformedFile",
            HarnessError::ScriptInvalid { .. } => "ScriptInvalid",
            HarnessError::NodeState(_) => "NodeState",
            HarnessError::Mismatch(_) => "Mismatch",
            HarnessError::Event { source, .. } => source.kind(),
            HarnessError::TrendViolated(_) => "TrendViolated",
        }
    }

    /// The codec error underneath any event annotation.
    pub fn codec_error(&self) -> Option<&regen_core::Error> {
        match self {
            HarnessError::Codec(e) => Some(e),
            HarnessError::Event { source, .. } => source.codec_error(),
            _ => None,
        }
    }
}
