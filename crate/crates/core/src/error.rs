use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(usize),

    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("resource cap exceeded: {what} reached the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("operation requires a path-idempotent element")]
    NotPathIdempotent,

    #[error("operation is undefined on the absorbing element")]
    BotElement,

    #[error("the empty word has no factorisation tree")]
    EmptyWord,

    #[error("word is rejected by the automaton")]
    WordRejected,

    #[error("automaton must be deterministic")]
    NotDeterministic,

    #[error("node {0} is not a fault")]
    NotAFault(usize),

    #[error("derivation does not realize its element: {0}")]
    DerivationMismatch(String),

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
