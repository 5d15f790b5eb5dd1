//! Error type shared across the workspace.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("self-loop ({0},{0}) rejected")]
    SelfLoop(u32),

    #[error("block on base edge {u}-{v}: expected {expected_rows}x{expected_cols}, got {got_rows}x{got_cols}")]
    BlockDimensionMismatch {
        u: u32,
        v: u32,
        expected_rows: usize,
        expected_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },

    #[error("{what}: needs {required}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("exhaustive cap exceeded: {0}")]
    CapExceeded(String),

    #[error("attempts exhausted after {attempts}: {detail}")]
    AttemptsExhausted { attempts: u32, detail: String },

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bug guard tripped: {0}")]
    BugGuard(String),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("empty side: {0}")]
    EmptySide(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for usage/budget errors, 1 for
    /// invariant violations and bug guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BugGuard(_) => 1,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
