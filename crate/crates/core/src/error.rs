use thiserror::Error;

use crate::sets::{Colour, StateId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("colour {colour} is out of range (automaton has {count} colours)")]
    ColourOutOfRange { colour: Colour, count: u32 },

    #[error("state {state} is out of range (automaton has {count} states)")]
    StateOutOfRange { state: StateId, count: usize },

    #[error("symbol {symbol} is out of range (alphabet has {count} symbols)")]
    SymbolOutOfRange { symbol: u32, count: usize },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("an automaton needs at least one state")]
    NoStates,

    #[error("too many colours: {0} (at most {max})", max = crate::sets::MAX_COLOURS)]
    TooManyColours(u32),

    #[error("too many atomic propositions: {0} (at most {max})", max = crate::hoa::MAX_APS)]
    TooManyAps(usize),

    #[error("construction supports at most {max} states, got {got}")]
    TooManyStates { got: usize, max: usize },

    #[error("transition {src} -{symbol}-> {dst} is given twice with different colours")]
    ConflictingTransition { src: StateId, symbol: u32, dst: StateId },

    #[error("the dual of the acceptance condition has no models")]
    NoModels,

    #[error("acceptance condition has the wrong shape: {0}")]
    ShapeMismatch(String),

    #[error("automata are over different alphabets")]
    AlphabetMismatch,

    #[error("macrostate budget of {0} exceeded")]
    BudgetExceeded(usize),

    #[error("oracle colour limit exceeded: {0} colours need enumeration (at most 12)")]
    OracleColourLimit(usize),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported HOA feature [{code}]: {message}")]
    Unsupported { code: &'static str, message: String },

    #[error("invalid lasso word: {0}")]
    InvalidWord(String),

    #[error("{0}")]
    Usage(String),
}
