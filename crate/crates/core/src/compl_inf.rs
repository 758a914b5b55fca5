//! Rank-based complementation of Inf-only automata into Büchi automata.
//!
//! The complement first follows all runs with a subset construction and at
//! some point guesses a tight level ranking together with a level model (a
//! minimal dual model per state). From then on rankings may only decrease,
//! and must drop to the even floor whenever a run sees a colour of its model
//! or switches models. A breakpoint set `O` checks that the even-ranked runs
//! tracked in each round eventually die or drop.

use std::fmt;

use crate::acceptance::ModelFamily;
use crate::error::{Error, Result};
use crate::explore::Explorer;
use crate::ranking::{count_tight, LevelRanking, Rank, RankingContext, Shape};
use crate::sets::{ColourSet, StateSet};
use crate::tela::{Symbol, Tela};

/// Default cap on the number of macrostates a construction may create.
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum InfMacrostate {
    Waiting(StateSet),
    Tight { s: StateSet, o: StateSet, f: LevelRanking, i: Rank },
}

impl InfMacrostate {
    pub fn describe(&self, models: &[ColourSet]) -> String {
        match self {
            InfMacrostate::Waiting(s) => s.to_string(),
            InfMacrostate::Tight { s, o, f, i } => format!("({s}, {o}, {}, {i})", f.describe(*s, models)),
        }
    }
}

/// A complement together with its macrostates (indexed by state id).
#[derive(Clone, Debug)]
pub struct ComplInfResult {
    pub automaton: Tela,
    pub macrostates: Vec<InfMacrostate>,
    pub models: ModelFamily,
}

impl ComplInfResult {
    pub fn tight_count(&self) -> usize {
        self.macrostates.iter().filter(|m| matches!(m, InfMacrostate::Tight { .. })).count()
    }
}

impl fmt::Display for ComplInfResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::hoa::print_hoa(&self.automaton))
    }
}

/// Fails early when the fresh rankings over `dom` would exceed the budget
/// (each one becomes a separate macrostate): tight rankings, times one model
/// choice per odd-ranked state, with at least one odd-ranked state.
pub(crate) fn check_ranking_count(dom: StateSet, num_models: usize, budget: usize) -> Result<()> {
    if dom.is_empty() {
        return Ok(());
    }
    let fresh = count_tight(dom.len() as u32).ok().and_then(|c| c.checked_mul(num_models as u128));
    match fresh {
        Some(c) if c <= budget as u128 => Ok(()),
        _ => Err(Error::BudgetExceeded(budget)),
    }
}

/// Complement of an Inf-only automaton as a transition-based Büchi automaton.
pub fn complement_inf(aut: &Tela, budget: usize) -> Result<ComplInfResult> {
    if aut.acceptance().has_fin() {
        return Err(Error::ShapeMismatch(format!("expected an Inf-only condition, got {}", aut.acceptance())));
    }
    aut.require_small()?;
    let models = aut.acceptance().minimal_models(aut.num_colours());
    let ctx = RankingContext::new(aut, ColourSet::EMPTY, models.as_slice())?;
    let mut ex = Explorer::new(budget);
    let init = ex.intern(InfMacrostate::Waiting(aut.initial_set()))?;
    while let Some((src, m)) = ex.pop() {
        for a in 0..aut.num_symbols() as Symbol {
            match &m {
                InfMacrostate::Waiting(s) => {
                    let s2 = aut.post(*s, a);
                    let dst = ex.intern(InfMacrostate::Waiting(s2))?;
                    ex.edge(src, a, dst, s.is_empty())?;
                    check_ranking_count(s2, models.len(), budget)?;
                    for f in ctx.fresh(s2, Shape::Strict) {
                        let dst = ex.intern(InfMacrostate::Tight { s: s2, o: StateSet::EMPTY, f, i: 0 })?;
                        ex.edge(src, a, dst, false)?;
                    }
                }
                InfMacrostate::Tight { s, o, f, i } => {
                    let s2 = aut.post(*s, a);
                    let r = f.rank();
                    for g in ctx.successors(*s, f, a, s2, r, Shape::Strict) {
                        let (i2, o2) = if o.is_empty() {
                            let i2 = (i + 2) % (r + 1);
                            (i2, g.preimage(s2, i2))
                        } else {
                            (*i, aut.post(*o, a).intersection(g.preimage(s2, *i)))
                        };
                        debug_assert!(g.is_tight(s2, models.len()) && i2 % 2 == 0 && i2 < r);
                        let dst = ex.intern(InfMacrostate::Tight { s: s2, o: o2, f: g, i: i2 })?;
                        ex.edge(src, a, dst, o.is_empty())?;
                    }
                }
            }
        }
    }
    let (automaton, macrostates) = ex.finish(aut, vec![init], |m| m.describe(models.as_slice()))?;
    Ok(ComplInfResult { automaton, macrostates, models })
}

/// Complement when the condition holds for every colour set: exactly the
/// words without an infinite run, via a subset construction that accepts
/// once the set of runs is empty.
pub fn complement_valid(aut: &Tela, budget: usize) -> Result<Tela> {
    aut.require_small()?;
    let mut ex = Explorer::new(budget);
    let init = ex.intern(aut.initial_set())?;
    while let Some((src, s)) = ex.pop() {
        for a in 0..aut.num_symbols() as Symbol {
            let dst = ex.intern(aut.post(s, a))?;
            ex.edge(src, a, dst, s.is_empty())?;
        }
    }
    Ok(ex.finish(aut, vec![init], |s| s.to_string())?.0)
}

/// Every `Q₂` macrostate of the construction over `n` states: `f` is
/// `(S, μ)`-tight, `i ∈ {0, 2, …, 2n−2}` and `O ⊆ S ∩ f⁻¹(i)`. Exponential;
/// meant for very small automata.
pub fn q2_space(aut: &Tela) -> Result<Vec<InfMacrostate>> {
    let models = aut.acceptance().minimal_models(aut.num_colours());
    let ctx = RankingContext::new(aut, ColourSet::EMPTY, models.as_slice())?;
    let n = aut.num_states();
    let mut out = Vec::new();
    for s in StateSet::full(n).subsets() {
        for f in ctx.fresh(s, Shape::Strict) {
            for i in (0..2 * n as Rank).step_by(2) {
                for o in f.preimage(s, i).subsets() {
                    out.push(InfMacrostate::Tight { s, o, f: f.clone(), i });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceFormula as F;
    use crate::oracle::{accepts, is_empty, xor_suite, LassoWord};
    use crate::tela::Transition;
    use std::collections::HashSet;

    fn t1(alpha: F, k: u32) -> Tela {
        Tela::new(vec![], 1, [0], k, alpha, [Transition::new(0, 0, 0, [0])]).unwrap()
    }

    #[test]
    fn complement_of_t1_is_empty() {
        let c = complement_inf(&t1(F::Inf(0), 1), DEFAULT_BUDGET).unwrap();
        assert!(is_empty(&c.automaton).unwrap());
        assert!(xor_suite(&t1(F::Inf(0), 1), &c.automaton, 2, 3).unwrap().passed());
    }

    #[test]
    fn unused_colour_gives_universal_complement() {
        let c = complement_inf(&t1(F::Inf(1), 2), DEFAULT_BUDGET).unwrap();
        assert!(accepts(&c.automaton, &LassoWord::new(vec![], vec![0]).unwrap()).unwrap());
    }

    #[test]
    fn no_initial_states_gives_universal_complement() {
        let a = t1(F::Inf(0), 1).with_initial([]).unwrap();
        let c = complement_inf(&a, DEFAULT_BUDGET).unwrap();
        assert!(accepts(&c.automaton, &LassoWord::new(vec![], vec![0]).unwrap()).unwrap());
        assert_eq!(c.automaton.num_states(), 1);
    }

    #[test]
    fn worked_example_and_state_space() {
        // two states, Inf(0) & (Inf(1) | Inf(2)), two letters
        let a = Tela::new(
            Tela::aps_named(1),
            2,
            [0],
            3,
            F::and([F::Inf(0), F::or([F::Inf(1), F::Inf(2)])]),
            [
                Transition::new(0, 0, 0, [0]),
                Transition::new(0, 1, 1, [1]),
                Transition::new(1, 0, 0, [2]),
                Transition::new(1, 1, 1, []),
                Transition::new(1, 1, 0, [0, 1]),
            ],
        )
        .unwrap();
        let c = complement_inf(&a, DEFAULT_BUDGET).unwrap();
        assert!(xor_suite(&a, &c.automaton, 2, 3).unwrap().passed());
        let space: HashSet<_> = q2_space(&a).unwrap().into_iter().collect();
        for m in &c.macrostates {
            if let InfMacrostate::Tight { .. } = m {
                assert!(space.contains(m), "{m:?} outside Q2");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = t1(F::Inf(1), 2);
        assert_eq!(complement_inf(&a, 1).unwrap_err(), Error::BudgetExceeded(1));
    }

    #[test]
    fn valid_condition_complement() {
        let a = Tela::new(vec![], 2, [0], 0, F::True, [Transition::new(0, 0, 1, [])]).unwrap();
        let c = complement_valid(&a, DEFAULT_BUDGET).unwrap();
        assert!(accepts(&c, &LassoWord::new(vec![], vec![0]).unwrap()).unwrap());
        let looping = Tela::new(vec![], 1, [0], 0, F::True, [Transition::new(0, 0, 0, [])]).unwrap();
        assert!(is_empty(&complement_valid(&looping, DEFAULT_BUDGET).unwrap()).unwrap());
    }
}
