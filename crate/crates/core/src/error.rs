use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph6 text; `offset` is the byte position of the fault.
    #[error("graph6 codec error at byte {offset}: {reason}")]
    Codec { offset: usize, reason: String },

    /// Malformed edge-list text or an out-of-range argument.
    #[error("input error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Input { line: Option<usize>, message: String },

    #[error("unsupported graph size: n = {n} (maximum {max})")]
    UnsupportedSize { n: usize, max: usize },

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The graph lacks the structure an operation needs (bridge, uncovered vertex, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// A bounded search hit its limit.
    #[error("budget exhausted in {stage}: limit {limit}, reached {partial}")]
    Budget {
        stage: &'static str,
        limit: usize,
        partial: usize,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(message: impl Into<String>) -> Self {
        Error::Input {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn input_at(line: usize, message: impl Into<String>) -> Self {
        Error::Input {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
