//! Complementation of transition-based Emerson-Lei automata.

pub mod acceptance;
pub mod compl_inf;
pub mod error;
mod explore;
pub mod hoa;
pub mod modular;
pub mod oracle;
pub mod pipeline;
pub mod random;
pub mod ranking;
pub mod rundag;
pub mod selftest;
pub mod sets;
pub mod tela;
pub mod transform;

pub use acceptance::{AccClass, AcceptanceFormula, GenRabinPair, ModelFamily, PropFormula};
pub use compl_inf::DEFAULT_BUDGET;
pub use error::{Error, Result};
pub use oracle::{accepts, is_empty, xor_suite, LassoWord, XorReport};
pub use sets::{Colour, ColourSet, StateId, StateSet};
pub use tela::{Symbol, Tela, Transition};
