use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GasketError>;

#[derive(Debug, Error)]
pub enum GasketError {
    #[error("invalid letter {0} (letters must be 1, 2 or 3)")]
    InvalidLetter(u8),
    #[error("word of length {len} exceeds the maximum of {max} letters")]
    WordTooLong { len: usize, max: usize },
    #[error("invalid corner {0} (corners are 1, 2 or 3)")]
    InvalidCorner(u8),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("vertex {0} is not a vertex of the level-{1} graph")]
    VertexNotInGraph(String, usize),
    #[error("enumeration budget exceeded: {requested} {what} requested, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("degenerate matrix product for word {0}")]
    Degenerate(String),
    #[error("dimension estimate did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GasketError {
    /// Process exit status: 2 usage, 3 budget, 4 failed invariant or
    /// non-convergence, 1 for I/O and serialisation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            GasketError::BudgetExceeded { .. } => 3,
            GasketError::Invariant(_) | GasketError::NonConvergence(_) => 4,
            GasketError::Io(_) | GasketError::Json(_) | GasketError::Csv(_) => 1,
            _ => 2,
        }
    }
}
