//! On-the-fly reachability for macrostate constructions.

use std::hash::Hash;

use indexmap::IndexSet;

use crate::acceptance::AcceptanceFormula;
use crate::error::{Error, Result};
use crate::sets::{ColourSet, StateId};
use crate::tela::{Symbol, Tela, Transition};

const EDGES_PER_STATE: usize = 64;

/// Numbers macrostates in discovery order and collects the transitions of
/// a transition-based Büchi automaton.
pub(crate) struct Explorer<M> {
    states: IndexSet<M>,
    next: usize,
    budget: usize,
    transitions: Vec<Transition>,
}

impl<M: Hash + Eq + Clone> Explorer<M> {
    pub fn new(budget: usize) -> Self {
        Explorer { states: IndexSet::new(), next: 0, budget, transitions: Vec::new() }
    }

    pub fn intern(&mut self, m: M) -> Result<StateId> {
        let (id, fresh) = self.states.insert_full(m);
        if fresh && self.states.len() > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(id as StateId)
    }

    /// Next macrostate whose successors are still to be computed.
    pub fn pop(&mut self) -> Option<(StateId, M)> {
        let m = self.states.get_index(self.next)?.clone();
        self.next += 1;
        Some(((self.next - 1) as StateId, m))
    }

    /// Records a transition; the number of transitions is capped at
    /// [`EDGES_PER_STATE`] times the state budget.
    pub fn edge(&mut self, src: StateId, symbol: Symbol, dst: StateId, accepting: bool) -> Result<()> {
        if self.transitions.len() >= self.budget.saturating_mul(EDGES_PER_STATE) {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let colours = if accepting { ColourSet::singleton(0) } else { ColourSet::EMPTY };
        self.transitions.push(Transition { src, symbol, dst, colours });
        Ok(())
    }

    /// The Büchi automaton `Inf(0)`; macrostates are returned in id order.
    pub fn finish(self, source: &Tela, initial: Vec<StateId>, name: impl Fn(&M) -> String) -> Result<(Tela, Vec<M>)> {
        let names = self.states.iter().map(&name).collect();
        let n = self.states.len().max(1);
        let aut = Tela::new(source.aps().to_vec(), n, initial, 1, AcceptanceFormula::Inf(0), self.transitions)?;
        let aut = if self.states.is_empty() { aut } else { aut.with_state_names(names)? };
        Ok((aut, self.states.into_iter().collect()))
    }
}
