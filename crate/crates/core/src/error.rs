use thiserror::Error;

/// Errors produced by graph computations, the environment, the policies and
/// the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("independence-number search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },

    #[error("round {round} is past the horizon {horizon}")]
    HorizonExceeded { round: usize, horizon: usize },

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidInput(_) => "invalid_input",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::HorizonExceeded { .. } => "horizon_exceeded",
            Error::ProtocolViolation(_) => "protocol_violation",
            Error::DegenerateGraph(_) => "degenerate_graph",
            Error::Validation(_) => "validation",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn invalid_input(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
