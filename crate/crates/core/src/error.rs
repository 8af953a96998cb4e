use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} of the transition matrix is not stochastic (sum = {sum})")]
    NonStochastic { row: usize, sum: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("stationary vector does not satisfy pQ = p (max deviation {deviation:e})")]
    NotStationary { deviation: f64 },

    #[error("chain is not irreducible (power iteration stopped after {iterations} iterations)")]
    Reducible { iterations: usize },

    #[error("invalid letter {0:?}; expected one of A, C, G, T")]
    InvalidLetter(char),

    #[error("word must contain at least one letter")]
    EmptyWord,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern is too short to determine the branch length (needs more than {available} letters)")]
    PatternTooShort { available: usize },

    #[error("the tree is empty")]
    EmptyTree,

    #[error("pattern cycle uses the zero-probability transition {from}->{to}")]
    UnsupportedTransition { from: char, to: char },

    #[error("the supported-transition graph has no cycle")]
    NoSupportedCycle,

    #[error("word {0} has zero probability under the model")]
    ZeroProbability(String),

    #[error("resolvent I - tQ~ is singular at t = {t} (|t| must stay below 1/gamma)")]
    SingularResolvent { t: f64 },

    #[error("t = {t} is outside the domain: {reason}")]
    OutOfDomain { t: f64, reason: &'static str },

    #[error("empty FASTA file: {0}")]
    EmptyFile(PathBuf),

    #[error("malformed FASTA in {path}: line {line} precedes any '>' header")]
    MalformedHeader { path: PathBuf, line: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
