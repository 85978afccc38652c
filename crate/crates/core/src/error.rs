use thiserror::Error;

use crate::sst::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("update is not copyless: variable `{0}` occurs more than once")]
    NotCopyless(String),

    #[error("variable sets differ ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },

    #[error("run is not accepting: {0}")]
    NotAccepting(&'static str),

    #[error("broken run: step {step} leaves state {found}, expected {expected}")]
    BrokenRun {
        step: usize,
        expected: String,
        found: String,
    },

    #[error("unknown transition index {0}")]
    UnknownTransition(usize),

    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("update is not skeleton-idempotent")]
    NotIdempotent,

    #[error("invalid loop [{start}, {end}]: {reason}")]
    InvalidLoop {
        start: usize,
        end: usize,
        reason: &'static str,
    },

    #[error("loops [{0}, {1}] and [{2}, {3}] overlap")]
    OverlappingLoops(usize, usize, usize, usize),

    #[error("pumping counts must be positive and match the loops")]
    BadCounts,

    #[error("primitive root of the empty word is undefined")]
    EmptyWord,

    #[error("no value for parameter p{0}")]
    MissingParameter(usize),

    #[error("expected a single-parameter inequality, found {0} parameters")]
    NotSingleParameter(usize),

    #[error("a system of inequalities must be non-empty")]
    EmptySystem,

    #[error("seed assignment is not a solution")]
    SeedNotSolution,

    #[error("position out of range: {0}")]
    OutOfRange(String),

    #[error("runs consume different inputs")]
    InputMismatch,

    #[error("runs produce different outputs")]
    OutputMismatch,

    #[error("invalid marked sequence: {0}")]
    InvalidMark(&'static str),

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("malformed witness: {0}")]
    MalformedWitness(String),
}
