use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("occurs check violated: {var} occurs in {image}")]
    OccursViolation { var: String, image: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuzzleError {
    #[error("boards have different dimensions ({0}x{1} vs {2}x{3})")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("term is not a board encoding: {0}")]
    NotABoard(String),
    #[error("proof state is not ground: {0}")]
    NonGroundState(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("board with {0} slots exceeds the enumeration guard of {max} slots", max = crate::oracle::MAX_SLOTS)]
    TooLarge(usize),
    #[error("oracle cache {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("oracle cache {path}: {message}")]
    BadCache { path: PathBuf, message: String },
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("no records to summarize")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },
}
