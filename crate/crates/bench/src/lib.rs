//! Shared inputs for the benchmarks.

use elcompl::random::{random_automaton, GenParams, RandomClass};
use elcompl::Tela;

pub const SEED: u64 = 2024;

/// `count` automata of `class` with at most `max_states` states, fixed seed.
pub fn corpus(class: RandomClass, count: u64, max_states: usize) -> Vec<Tela> {
    (0..count)
        .map(|i| random_automaton(SEED, class, i, GenParams { max_states, ..GenParams::default() }).expect("generator"))
        .collect()
}
