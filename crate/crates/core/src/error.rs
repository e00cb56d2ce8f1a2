use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node id {id} exceeds the supported capacity of {max} nodes")]
    Capacity { id: u64, max: u64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("{what} did not converge after {iterations} iterations (last residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error(
        "series for column {column} stagnated at term {term} \
         (increment {increment:e}, lambda_c estimate {lambda_c})"
    )]
    Divergence {
        column: usize,
        term: usize,
        increment: f64,
        lambda_c: f64,
    },

    #[error("degenerate selection: {0}")]
    DegenerateSelection(String),

    #[error("invalid selection: {0}")]
    Selection(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dense oracle refused: N = {n} exceeds the guard of {max}")]
    TooLarge { n: usize, max: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotConverged { .. } | Error::Divergence { .. })
    }
}
