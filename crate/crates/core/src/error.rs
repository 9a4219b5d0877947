use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty vocabulary: no term occurs at least {threshold} times")]
    EmptyVocabulary { threshold: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: feature indices must be strictly increasing ({previous} then {next})")]
    NonAscendingIndex {
        line: usize,
        previous: u32,
        next: u32,
    },

    #[error("invalid feature list for example {id}: {message}")]
    InvalidExample { id: usize, message: String },

    #[error("cannot make {k} folds from {examples} examples")]
    InvalidFolds { k: usize, examples: usize },

    #[error("prediction vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("example {id} has no gold label")]
    MissingLabel { id: usize },

    #[error("maximum-entropy training needs both classes, got only {0}")]
    SingleClass(crate::Label),

    #[error("margin is undefined for maximum-entropy models")]
    MarginUndefined,

    #[error(
        "{solver} did not converge in {iterations} iterations \
         (achieved {achieved:e}, wanted {tolerance:e}, objective {objective})"
    )]
    NotConverged {
        solver: &'static str,
        iterations: usize,
        achieved: f64,
        tolerance: f64,
        objective: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Layout { path: PathBuf, message: String },

    #[error("trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
