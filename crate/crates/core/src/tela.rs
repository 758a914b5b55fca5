//! Transition-based Emerson-Lei automata.

use std::fmt;

use serde::Serialize;

use crate::acceptance::AcceptanceFormula;
use crate::error::{Error, Result};
use crate::hoa::MAX_APS;
use crate::sets::{Colour, ColourSet, StateId, StateSet, MAX_COLOURS, MAX_SET_STATES};

/// Index of a letter; letters are the minterms over the atomic propositions,
/// bit `i` of the index giving the value of AP `i`.
pub type Symbol = u32;

/// One coloured transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Transition {
    pub src: StateId,
    pub symbol: Symbol,
    pub dst: StateId,
    pub colours: ColourSet,
}

impl Transition {
    pub fn new(src: StateId, symbol: Symbol, dst: StateId, colours: impl IntoIterator<Item = Colour>) -> Self {
        Transition { src, symbol, dst, colours: colours.into_iter().collect() }
    }
}

/// An immutable, validated TELA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tela {
    aps: Vec<String>,
    num_states: usize,
    initial: Vec<StateId>,
    num_colours: u32,
    acceptance: AcceptanceFormula,
    // edges[q][a] sorted by destination
    edges: Vec<Vec<Vec<(StateId, ColourSet)>>>,
    state_names: Option<Vec<String>>,
    name: Option<String>,
}

impl Tela {
    /// Builds and validates an automaton; the formula is stored normalised.
    pub fn new(
        aps: Vec<String>,
        num_states: usize,
        initial: impl IntoIterator<Item = StateId>,
        num_colours: u32,
        acceptance: AcceptanceFormula,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::NoStates);
        }
        if aps.len() > MAX_APS {
            return Err(Error::TooManyAps(aps.len()));
        }
        if num_colours > MAX_COLOURS {
            return Err(Error::TooManyColours(num_colours));
        }
        acceptance.check_colours(num_colours)?;
        let symbols = 1usize << aps.len();
        let check_state = |q: StateId| {
            if (q as usize) < num_states {
                Ok(())
            } else {
                Err(Error::StateOutOfRange { state: q, count: num_states })
            }
        };
        let mut init: Vec<StateId> = initial.into_iter().collect();
        for &q in &init {
            check_state(q)?;
        }
        init.sort_unstable();
        init.dedup();

        let mut edges = vec![vec![Vec::new(); symbols]; num_states];
        for t in transitions {
            check_state(t.src)?;
            check_state(t.dst)?;
            if t.symbol as usize >= symbols {
                return Err(Error::SymbolOutOfRange { symbol: t.symbol, count: symbols });
            }
            if let Some(colour) = t.colours.iter().find(|c| *c >= num_colours) {
                return Err(Error::ColourOutOfRange { colour, count: num_colours });
            }
            let slot: &mut Vec<(StateId, ColourSet)> = &mut edges[t.src as usize][t.symbol as usize];
            match slot.iter().find(|(d, _)| *d == t.dst) {
                Some((_, c)) if *c == t.colours => {}
                Some(_) => {
                    return Err(Error::ConflictingTransition { src: t.src, symbol: t.symbol, dst: t.dst })
                }
                None => slot.push((t.dst, t.colours)),
            }
        }
        for row in &mut edges {
            for slot in row.iter_mut() {
                slot.sort_unstable_by_key(|(d, _)| *d);
            }
        }
        Ok(Tela {
            aps,
            num_states,
            initial: init,
            num_colours,
            acceptance: acceptance.normalized(),
            edges,
            state_names: None,
            name: None,
        })
    }

    /// Automaton over a single unnamed letter-free alphabet of `2^|aps|` letters
    /// with `num_aps` generated AP names `p0, p1, ...`.
    pub fn aps_named(num_aps: usize) -> Vec<String> {
        (0..num_aps).map(|i| format!("p{i}")).collect()
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.num_states {
            return Err(Error::ShapeMismatch(format!(
                "{} state names for {} states",
                names.len(),
                self.num_states
            )));
        }
        self.state_names = Some(names);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn num_symbols(&self) -> usize {
        1 << self.aps.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn num_colours(&self) -> u32 {
        self.num_colours
    }

    pub fn acceptance(&self) -> &AcceptanceFormula {
        &self.acceptance
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    pub fn state_name(&self, q: StateId) -> Option<&str> {
        self.state_names.as_ref().map(|v| v[q as usize].as_str())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Successors of `q` on `a`, sorted by destination.
    pub fn succ(&self, q: StateId, a: Symbol) -> &[(StateId, ColourSet)] {
        &self.edges[q as usize][a as usize]
    }

    /// All transitions in (src, symbol, dst) order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.edges.iter().enumerate().flat_map(|(q, row)| {
            row.iter().enumerate().flat_map(move |(a, slot)| {
                slot.iter().map(move |&(dst, colours)| Transition {
                    src: q as StateId,
                    symbol: a as Symbol,
                    dst,
                    colours,
                })
            })
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().flatten().map(Vec::len).sum()
    }

    /// Colours actually placed on some transition.
    pub fn used_colours(&self) -> ColourSet {
        self.transitions().fold(ColourSet::EMPTY, |acc, t| acc.union(t.colours))
    }

    /// Errors unless the automaton fits the bitset-based constructions.
    pub fn require_small(&self) -> Result<()> {
        if self.num_states > MAX_SET_STATES {
            Err(Error::TooManyStates { got: self.num_states, max: MAX_SET_STATES })
        } else {
            Ok(())
        }
    }

    pub fn initial_set(&self) -> StateSet {
        self.initial.iter().copied().collect()
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states)
    }

    /// `δ(S, a)`.
    pub fn post(&self, s: StateSet, a: Symbol) -> StateSet {
        self.post_avoiding(s, a, ColourSet::EMPTY)
    }

    /// `Δ(S, a)`: successors over transitions carrying none of `avoid`.
    pub fn post_avoiding(&self, s: StateSet, a: Symbol, avoid: ColourSet) -> StateSet {
        let mut out = StateSet::EMPTY;
        for q in s.iter() {
            for &(d, c) in self.succ(q, a) {
                if !c.intersects(avoid) {
                    out.insert(d);
                }
            }
        }
        out
    }

    /// Same structure with a new colouring and condition.
    pub fn recoloured(
        &self,
        num_colours: u32,
        acceptance: AcceptanceFormula,
        recolour: impl Fn(ColourSet) -> ColourSet,
    ) -> Result<Tela> {
        let ts: Vec<_> = self
            .transitions()
            .map(|t| Transition { colours: recolour(t.colours), ..t })
            .collect();
        let mut out = Tela::new(self.aps.clone(), self.num_states, self.initial.clone(), num_colours, acceptance, ts)?;
        out.state_names = self.state_names.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    /// Same automaton under a different condition over the same colours.
    pub fn with_acceptance(&self, acceptance: AcceptanceFormula) -> Result<Tela> {
        self.recoloured(self.num_colours, acceptance, |c| c)
    }

    /// Same automaton with a different initial set.
    pub fn with_initial(&self, initial: impl IntoIterator<Item = StateId>) -> Result<Tela> {
        let mut out = Tela::new(
            self.aps.clone(),
            self.num_states,
            initial,
            self.num_colours,
            self.acceptance.clone(),
            self.transitions(),
        )?;
        out.state_names = self.state_names.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    /// Letter name used by the command line: `a`, `b`, ... by minterm index.
    pub fn symbol_name(a: Symbol) -> String {
        if a < 26 {
            char::from(b'a' + a as u8).to_string()
        } else {
            format!("<{a}>")
        }
    }

    /// Inverse of [`Tela::symbol_name`] for a single character.
    pub fn parse_symbol(&self, ch: char) -> Result<Symbol> {
        let idx = (ch as u32).wrapping_sub('a' as u32);
        if ch.is_ascii_lowercase() && (idx as usize) < self.num_symbols() {
            Ok(idx)
        } else {
            Err(Error::UnknownSymbol(ch.to_string()))
        }
    }
}

impl fmt::Display for Tela {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::hoa::print_hoa(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AcceptanceFormula as F;

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Tela::new(vec![], 0, [], 0, F::True, []), Err(Error::NoStates));
        let dup = [Transition::new(0, 0, 0, [0]), Transition::new(0, 0, 0, [])];
        assert!(matches!(
            Tela::new(vec![], 1, [0], 1, F::Inf(0), dup),
            Err(Error::ConflictingTransition { .. })
        ));
        assert!(matches!(
            Tela::new(vec![], 1, [0], 1, F::Inf(1), []),
            Err(Error::ColourOutOfRange { colour: 1, .. })
        ));
        assert!(matches!(
            Tela::new(vec![], 1, [0], 0, F::True, [Transition::new(0, 1, 0, [])]),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn post_respects_avoided_colours() {
        let a = Tela::new(
            Tela::aps_named(1),
            2,
            [0],
            2,
            F::Inf(0),
            [Transition::new(0, 0, 0, [0]), Transition::new(0, 0, 1, [1]), Transition::new(1, 1, 1, [])],
        )
        .unwrap();
        let s = StateSet::singleton(0);
        assert_eq!(a.post(s, 0), [0, 1].into_iter().collect());
        assert_eq!(a.post_avoiding(s, 0, ColourSet::singleton(0)), StateSet::singleton(1));
        assert_eq!(a.post(s, 1), StateSet::EMPTY);
        assert_eq!(a.num_transitions(), 3);
    }
}
