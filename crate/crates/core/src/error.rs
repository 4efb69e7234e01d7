use thiserror::Error;

/// Errors produced by the automata, witness and engine layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: expected {expected} letters, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("domain size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("letter {letter} out of range for alphabet of size {alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },

    #[error("state {state} out of range for {states} states")]
    StateOutOfRange { state: usize, states: usize },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("rank {index} out of range (limit {limit})")]
    RankOutOfRange { index: u64, limit: u64 },

    #[error("subset construction exceeded {limit} states")]
    SubsetLimit { limit: usize },

    #[error("alphabet of {letters} letters exceeds the cap of {limit}")]
    LetterLimit { letters: u128, limit: usize },

    #[error("invalid witness configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("arity mismatch: operation needs {needed} inputs, got {given}")]
    Arity { needed: usize, given: usize },

    #[error("enumeration budget exceeded: {needed} cases, budget {budget}")]
    Budget { needed: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
