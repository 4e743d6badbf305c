use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error at line {line}: {message}")]
    ConfigLine { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("invalid energy {0} eV")]
    InvalidEnergy(f64),

    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("physics error: {0}")]
    Physics(String),

    #[error("statistics error: {0}")]
    Statistics(String),

    #[error("logic error: {0}")]
    Logic(String),

    #[error("fission bank is empty after batch {batch}: population collapsed")]
    PopulationCollapse { batch: u32 },

    #[error("history {particle} in batch {batch} consumed {draws} random numbers (stream stride {stride})")]
    StreamOverlap {
        batch: u32,
        particle: u64,
        draws: u64,
        stride: u64,
    },

    #[error("history {particle} in batch {batch} exceeded {limit} tally log entries")]
    RunawayHistory {
        batch: u32,
        particle: u64,
        limit: usize,
    },

    #[error("library file: {0}")]
    Format(String),

    #[error("reproducibility check failed: {0}")]
    Reproducibility(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigLine { .. } | Error::Config(_) => 2,
            Error::Reproducibility(_) => 4,
            _ => 3,
        }
    }
}
