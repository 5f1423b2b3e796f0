use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad flags or an invalid combination of them.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] rsfd_core::Error),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("every attribute of the estimate is absent")]
    NoAttributes,

    #[error("cell solution={solution} epsilon={epsilon} run={run} failed: {source}")]
    Cell {
        solution: String,
        epsilon: f64,
        run: usize,
        source: Box<BenchError>,
    },

    #[error("{path}: {reason}")]
    Results { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// 1 for usage errors, 2 for everything that went wrong with data.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
