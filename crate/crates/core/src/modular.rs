//! Modular complementation of conditions `Fin(c) & φ`.
//!
//! The framework tracks all runs in `S` and, in `P`, the runs that must
//! either stop or see colour `c` again; a pluggable subprocedure complements
//! `φ` over the transitions avoiding `c` (`Δ`). A transition is accepting
//! when the subprocedure's target macrostate is an empty breakpoint, and
//! after such a breakpoint `P` is refilled with all current runs.
//!
//! Rank-based subprocedures work with an odd phase rank `R`. Runs injected
//! into `P` at a breakpoint may need more than the runs already ranked:
//! the refill may raise `R` (up to `2n - 1`), and tracking rankings may use
//! the even value `R + 1` for runs that still see a `φ`-colour before
//! settling. Active rankings are tight with maximum exactly `R`.

use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;

use crate::acceptance::{to_gen_rabin, AcceptanceFormula, GenRabinPair, ModelFamily};
use crate::compl_inf::{check_ranking_count, complement_inf, complement_valid, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::explore::Explorer;
use crate::ranking::{LevelRanking, Rank, RankingContext, Shape};
use crate::sets::{Colour, ColourSet, StateSet};
use crate::tela::{Symbol, Tela};
use crate::transform::{product_within, reduce_inf, ProductMode};

/// A complementation engine for `φ` driven by [`mod_compl`].
///
/// `p` is the previous `P` component (the domain of any ranking in `m`) and
/// `p2` the framework-provided next one.
pub trait Subprocedure: Sync {
    type M: Clone + Eq + Hash + Debug + Send;

    fn initial(&self, init: StateSet) -> Vec<Self::M>;
    fn succ_act(&self, p: StateSet, p2: StateSet, a: Symbol, m: &Self::M) -> Result<Vec<Self::M>>;
    fn succ_track(&self, p: StateSet, p2: StateSet, a: Symbol, m: &Self::M) -> Result<Vec<Self::M>>;
    fn breakempty(&self, m: &Self::M) -> bool;
    fn describe(&self, p: StateSet, m: &Self::M) -> String;
}

/// Subprocedure for `φ = t`: the macrostate mirrors `P`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubTrue;

impl Subprocedure for SubTrue {
    type M = StateSet;

    fn initial(&self, init: StateSet) -> Vec<StateSet> {
        vec![init]
    }

    fn succ_act(&self, _p: StateSet, p2: StateSet, _a: Symbol, _m: &StateSet) -> Result<Vec<StateSet>> {
        Ok(vec![p2])
    }

    fn succ_track(&self, _p: StateSet, _p2: StateSet, _a: Symbol, _m: &StateSet) -> Result<Vec<StateSet>> {
        Ok(vec![])
    }

    fn breakempty(&self, m: &StateSet) -> bool {
        m.is_empty()
    }

    fn describe(&self, _p: StateSet, m: &StateSet) -> String {
        m.to_string()
    }
}

/// Macrostates of the rank-based subprocedures.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RankMacrostate {
    /// Mirrors `P` before any ranking is guessed.
    Set(StateSet),
    Active { f: LevelRanking, o: StateSet, i: Rank },
    /// `r` is the odd rank the phase works with; values may reach `r + 1`.
    Tracking { f: LevelRanking, r: Rank, i: Rank },
}

/// Rank-based subprocedure for `φ = ⋀ Inf(G_l)` over `Δ`. With a single
/// colour this is the Rabin-pair subprocedure; with several it carries level
/// models and keeps set macrostates alive under tracking.
#[derive(Clone, Debug)]
pub struct SubRank<'a> {
    aut: &'a Tela,
    avoid: ColourSet,
    models: ModelFamily,
    set_persists: bool,
    budget: usize,
}

impl<'a> SubRank<'a> {
    fn ctx(&self) -> RankingContext<'_> {
        RankingContext { aut: self.aut, avoid: self.avoid, models: self.models.as_slice() }
    }

    pub fn models(&self) -> &ModelFamily {
        &self.models
    }

    /// Refuse to start ranking phases with more fresh rankings than `budget`.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Does a reachable macrostate respect its typing?
    pub fn well_formed(&self, p: StateSet, m: &RankMacrostate) -> bool {
        let k = self.models.len();
        match m {
            RankMacrostate::Set(s) => *s == p,
            RankMacrostate::Active { f, o, i } => {
                f.is_tight(p, k) && o.is_subset(f.preimage(p, *i)) && i % 2 == 0 && *i < f.rank()
            }
            RankMacrostate::Tracking { f, r, i } => {
                f.tight_bound(p, k, Shape::Relaxed) == Some(*r) && i % 2 == 0 && i < r
            }
        }
    }
}

/// `I^Inf` for `Fin(c) & Inf(g)`.
pub fn sub_inf(aut: &Tela, c: Colour, g: Colour) -> Result<SubRank<'_>> {
    check_colour(aut, c)?;
    check_colour(aut, g)?;
    aut.require_small()?;
    Ok(SubRank {
        aut,
        avoid: ColourSet::singleton(c),
        models: ModelFamily::new(vec![ColourSet::singleton(g)]),
        set_persists: false,
        budget: DEFAULT_BUDGET,
    })
}

/// `I^⋀Inf` for `Fin(c) & ⋀_l Inf(G_l)`, where `Inf(G)` holds when some
/// colour of `G` recurs.
pub fn sub_conj_inf<'a>(aut: &'a Tela, c: Colour, sets: &[ColourSet]) -> Result<SubRank<'a>> {
    check_colour(aut, c)?;
    aut.require_small()?;
    let phi = AcceptanceFormula::and(sets.iter().map(|g| AcceptanceFormula::or(g.iter().map(AcceptanceFormula::Inf))));
    phi.check_colours(aut.num_colours())?;
    let models = phi.normalized().minimal_models(aut.num_colours());
    if models.is_empty() {
        return Err(Error::NoModels);
    }
    Ok(SubRank { aut, avoid: ColourSet::singleton(c), models, set_persists: true, budget: DEFAULT_BUDGET })
}

fn check_colour(aut: &Tela, c: Colour) -> Result<()> {
    if c < aut.num_colours() {
        Ok(())
    } else {
        Err(Error::ColourOutOfRange { colour: c, count: aut.num_colours() })
    }
}

impl Subprocedure for SubRank<'_> {
    type M = RankMacrostate;

    fn initial(&self, init: StateSet) -> Vec<RankMacrostate> {
        vec![RankMacrostate::Set(init)]
    }

    fn succ_act(&self, p: StateSet, p2: StateSet, a: Symbol, m: &RankMacrostate) -> Result<Vec<RankMacrostate>> {
        let ctx = self.ctx();
        Ok(match m {
            RankMacrostate::Set(_) => vec![RankMacrostate::Set(p2)],
            RankMacrostate::Active { f, o, i } => {
                let r = f.rank();
                if o.is_empty() {
                    // `P` is refilled here; injected runs may need a larger
                    // odd rank, so the phase rank may grow.
                    let top = 2 * self.aut.num_states() as Rank;
                    let mut out = Vec::new();
                    for r2 in (r..top).step_by(2) {
                        let i2 = (i + 2) % (r2 + 1);
                        out.extend(
                            ctx.successors(p, f, a, p2, r2, Shape::Relaxed)
                                .into_iter()
                                .map(|g| RankMacrostate::Tracking { f: g, r: r2, i: i2 }),
                        );
                    }
                    out
                } else {
                    let moved = self.aut.post_avoiding(*o, a, self.avoid);
                    ctx.successors(p, f, a, p2, r, Shape::Strict)
                        .into_iter()
                        .map(|g| {
                            let o2 = moved.intersection(g.preimage(p2, *i));
                            RankMacrostate::Active { f: g, o: o2, i: *i }
                        })
                        .collect()
                }
            }
            RankMacrostate::Tracking { .. } => vec![],
        })
    }

    fn succ_track(&self, p: StateSet, p2: StateSet, a: Symbol, m: &RankMacrostate) -> Result<Vec<RankMacrostate>> {
        let ctx = self.ctx();
        Ok(match m {
            RankMacrostate::Set(_) => {
                check_ranking_count(p2, self.models.len(), self.budget)?;
                let mut out: Vec<_> = ctx
                    .fresh_all(p2, Shape::Relaxed)
                    .into_iter()
                    .map(|(r, f)| RankMacrostate::Tracking { f, r, i: 0 })
                    .collect();
                // Persisting from an empty breakpoint would skip the refill of
                // `P` and accept forever, so set states only persist while
                // non-empty (where the move coincides with the active one).
                if self.set_persists && !p.is_empty() {
                    out.push(RankMacrostate::Set(p2));
                }
                out
            }
            RankMacrostate::Tracking { f, r, i } => {
                let mut out = Vec::new();
                for g in ctx.successors(p, f, a, p2, *r, Shape::Relaxed) {
                    if g.rank() == *r {
                        out.push(RankMacrostate::Active { f: g.clone(), o: g.preimage(p2, *i), i: *i });
                    }
                    out.push(RankMacrostate::Tracking { f: g, r: *r, i: *i });
                }
                out
            }
            RankMacrostate::Active { .. } => vec![],
        })
    }

    fn breakempty(&self, m: &RankMacrostate) -> bool {
        match m {
            RankMacrostate::Set(p) => p.is_empty(),
            RankMacrostate::Active { o, .. } => o.is_empty(),
            RankMacrostate::Tracking { .. } => false,
        }
    }

    fn describe(&self, p: StateSet, m: &RankMacrostate) -> String {
        let models = self.models.as_slice();
        match m {
            RankMacrostate::Set(s) => s.to_string(),
            RankMacrostate::Active { f, o, i } => format!("({}, {o}, {i})", f.describe(p, models)),
            RankMacrostate::Tracking { f, r, i } => format!("({}, {r}, {i})", f.describe(p, models)),
        }
    }
}

/// A framework macrostate `(S, P, m)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModMacrostate<M> {
    pub s: StateSet,
    pub p: StateSet,
    pub m: M,
}

#[derive(Clone, Debug)]
pub struct ModComplResult<M> {
    pub automaton: Tela,
    pub macrostates: Vec<ModMacrostate<M>>,
}

/// The complement of `aut`, whose condition must be `Fin(c) & φ`, given a
/// subprocedure for `φ` over the transitions avoiding `c`.
pub fn mod_compl<S: Subprocedure>(sub: &S, aut: &Tela, c: Colour, budget: usize) -> Result<ModComplResult<S::M>> {
    check_colour(aut, c)?;
    aut.require_small()?;
    let avoid = ColourSet::singleton(c);
    let mut ex = Explorer::new(budget);
    let init_set = aut.initial_set();
    let mut initial = Vec::new();
    for m in sub.initial(init_set) {
        initial.push(ex.intern(ModMacrostate { s: init_set, p: init_set, m })?);
    }
    while let Some((src, st)) = ex.pop() {
        for a in 0..aut.num_symbols() as Symbol {
            let s2 = aut.post(st.s, a);
            let moved = aut.post_avoiding(st.p, a, avoid);
            let p_act = if sub.breakempty(&st.m) { s2 } else { moved };
            for m2 in sub.succ_act(st.p, p_act, a, &st.m)? {
                let acc = sub.breakempty(&m2);
                let dst = ex.intern(ModMacrostate { s: s2, p: p_act, m: m2 })?;
                ex.edge(src, a, dst, acc)?;
            }
            for m2 in sub.succ_track(st.p, moved, a, &st.m)? {
                let acc = sub.breakempty(&m2);
                let dst = ex.intern(ModMacrostate { s: s2, p: moved, m: m2 })?;
                ex.edge(src, a, dst, acc)?;
            }
        }
    }
    let (automaton, macrostates) =
        ex.finish(aut, initial, |st| format!("({}, {}, {})", st.s, st.p, sub.describe(st.p, &st.m)))?;
    Ok(ModComplResult { automaton, macrostates })
}

/// How the per-clause complements of a generalized Rabin condition are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairStrategy {
    /// Single-colour Inf parts use `I^Inf`; others `I^⋀Inf`.
    Auto,
    /// Always `I^⋀Inf` for clauses with both Fin and Inf parts.
    ConjInf,
}

/// Complement of one clause `Fin(B) & ⋀ Inf(G_l)` of `aut` (already carrying
/// the fused Fin colour).
pub fn complement_pair(aut: &Tela, pair: &GenRabinPair, strategy: PairStrategy, budget: usize) -> Result<Tela> {
    match (pair.fin_colour, pair.inf.as_slice()) {
        (None, []) => complement_valid(aut, budget),
        (None, _) => Ok(complement_inf(&aut.with_acceptance(pair.inf_formula())?, budget)?.automaton),
        (Some(c), []) => Ok(mod_compl(&SubTrue, aut, c, budget)?.automaton),
        (Some(c), [g]) if g.len() == 1 && strategy == PairStrategy::Auto => {
            let g = g.iter().next().unwrap();
            Ok(mod_compl(&sub_inf(aut, c, g)?.with_budget(budget), aut, c, budget)?.automaton)
        }
        (Some(c), sets) => Ok(mod_compl(&sub_conj_inf(aut, c, sets)?.with_budget(budget), aut, c, budget)?.automaton),
    }
}

/// The automaton accepting every word: one state, one accepting loop per
/// letter.
pub fn universal(like: &Tela) -> Result<Tela> {
    let ts = (0..like.num_symbols() as Symbol).map(|a| crate::tela::Transition::new(0, a, 0, [0]));
    Tela::new(like.aps().to_vec(), 1, [0], 1, AcceptanceFormula::Inf(0), ts)
}

/// Complement of a generalized Rabin automaton: the product of the
/// complements of its clauses, each reduced before composition.
pub fn complement_gen_rabin(
    aut: &Tela,
    pairs: &[GenRabinPair],
    strategy: PairStrategy,
    budget: usize,
) -> Result<Tela> {
    if pairs.is_empty() {
        return universal(aut);
    }
    let parts: Vec<Tela> = pairs
        .par_iter()
        .map(|p| reduce_inf(&complement_pair(aut, p, strategy, budget)?))
        .collect::<Result<_>>()?;
    let (first, rest) = parts.split_first().unwrap();
    rest.iter()
        .try_fold(first.clone(), |acc, next| reduce_inf(&product_within(&acc, next, ProductMode::Reachable, budget)?))
}

/// Complement of an automaton whose DNF clauses are Rabin pairs
/// `Fin(b) & Inf(g)` (Rabin and min-odd parity conditions).
pub fn complement_rabin(aut: &Tela, budget: usize) -> Result<Tela> {
    let (rewritten, pairs) = to_gen_rabin(aut)?;
    for p in &pairs {
        let rabin_shaped = p.fin_colour.is_some() && p.inf.len() == 1 && p.inf[0].len() == 1;
        if !rabin_shaped {
            return Err(Error::ShapeMismatch(format!("not a Rabin condition: {}", aut.acceptance())));
        }
    }
    complement_gen_rabin(&rewritten, &pairs, PairStrategy::Auto, budget)
}

/// Complement of an arbitrary TELA through its DNF.
pub fn complement_tela(aut: &Tela, budget: usize) -> Result<Tela> {
    let (rewritten, pairs) = to_gen_rabin(aut)?;
    complement_gen_rabin(&rewritten, &pairs, PairStrategy::Auto, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceFormula as F;
    use crate::oracle::{accepts, is_empty, xor_suite, LassoWord};
    use crate::tela::Transition;

    const BUDGET: usize = 200_000;

    fn a_omega() -> LassoWord {
        LassoWord::new(vec![], vec![0]).unwrap()
    }

    #[test]
    fn co_buchi_loop_run() {
        let t2 = Tela::new(vec![], 1, [0], 1, F::Fin(0), [Transition::new(0, 0, 0, [0])]).unwrap();
        let r = mod_compl(&SubTrue, &t2, 0, BUDGET).unwrap();
        let p = StateSet::singleton(0);
        assert_eq!(r.macrostates[0], ModMacrostate { s: p, p, m: p });
        assert_eq!(r.macrostates[1], ModMacrostate { s: p, p: StateSet::EMPTY, m: StateSet::EMPTY });
        assert_eq!(r.automaton.succ(0, 0), &[(1, ColourSet::singleton(0))]);
        assert_eq!(r.automaton.succ(1, 0), &[(0, ColourSet::EMPTY)]);
        assert!(accepts(&r.automaton, &a_omega()).unwrap());
    }

    #[test]
    fn co_buchi_with_clean_cycle() {
        // 0 -a-> 1 {0}, 1 -a-> 1: the run settles in a 0-free cycle
        let a = Tela::new(
            vec![],
            2,
            [0],
            1,
            F::Fin(0),
            [Transition::new(0, 0, 1, [0]), Transition::new(1, 0, 1, []), Transition::new(0, 0, 0, [0])],
        )
        .unwrap();
        let c = mod_compl(&SubTrue, &a, 0, BUDGET).unwrap().automaton;
        assert!(!accepts(&c, &a_omega()).unwrap());
        assert!(xor_suite(&a, &c, 2, 3).unwrap().passed());
        assert!(c.num_states() <= 9);
    }

    #[test]
    fn rabin_pair_loops() {
        let both = Tela::new(vec![], 1, [0], 2, F::and([F::Fin(0), F::Inf(1)]), [Transition::new(0, 0, 0, [0, 1])]).unwrap();
        let c = mod_compl(&sub_inf(&both, 0, 1).unwrap(), &both, 0, BUDGET).unwrap().automaton;
        assert!(accepts(&c, &a_omega()).unwrap());
        assert!(xor_suite(&both, &c, 2, 3).unwrap().passed());
        let good = both.recoloured(2, both.acceptance().clone(), |_| ColourSet::singleton(1)).unwrap();
        let c = mod_compl(&sub_inf(&good, 0, 1).unwrap(), &good, 0, BUDGET).unwrap().automaton;
        assert!(is_empty(&c).unwrap());
    }

    #[test]
    fn injected_runs_need_an_even_rank_above_the_odd_maximum() {
        // s -c-> s, s -c-> p, p -g-> q, q -> q under Fin(c) & Inf(g): no
        // accepting run, and every breakpoint injects a fresh p that must
        // sit above q's odd rank.
        let (c, g) = (0, 1);
        let a = Tela::new(
            vec![],
            3,
            [0],
            2,
            F::and([F::Fin(c), F::Inf(g)]),
            [
                Transition::new(0, 0, 0, [c]),
                Transition::new(0, 0, 1, [c]),
                Transition::new(1, 0, 2, [g]),
                Transition::new(2, 0, 2, []),
            ],
        )
        .unwrap();
        let sub = sub_inf(&a, c, g).unwrap();
        let r = mod_compl(&sub, &a, c, BUDGET).unwrap();
        assert!(accepts(&r.automaton, &a_omega()).unwrap());
        for st in &r.macrostates {
            assert!(st.p.is_subset(st.s));
            assert!(sub.well_formed(st.p, &st.m), "{st:?}");
        }
        let conj = sub_conj_inf(&a, c, &[ColourSet::singleton(g)]).unwrap();
        let r2 = mod_compl(&conj, &a, c, BUDGET).unwrap();
        assert!(accepts(&r2.automaton, &a_omega()).unwrap());
    }

    #[test]
    fn empty_set_state_does_not_persist() {
        // 0 -{0}-> 1, 1 -{1,2}-> 1: a^ω is accepted, so the complement must
        // not loop on (S, ∅, ∅) through tracking moves.
        let a = Tela::new(
            vec![],
            3,
            [0],
            3,
            F::and([F::Fin(0), F::Inf(1), F::Inf(2)]),
            [Transition::new(0, 0, 1, [0]), Transition::new(1, 0, 1, [1, 2])],
        )
        .unwrap();
        let sub = sub_conj_inf(&a, 0, &[ColourSet::singleton(1), ColourSet::singleton(2)]).unwrap();
        let c = mod_compl(&sub, &a, 0, BUDGET).unwrap().automaton;
        assert!(!accepts(&c, &a_omega()).unwrap());
        assert!(xor_suite(&a, &c, 2, 3).unwrap().passed());
    }

    #[test]
    fn generalized_pair_unsatisfied() {
        let a = Tela::new(
            vec![],
            1,
            [0],
            3,
            F::and([F::Fin(0), F::Inf(1), F::Inf(2)]),
            [Transition::new(0, 0, 0, [1])],
        )
        .unwrap();
        let sub = sub_conj_inf(&a, 0, &[ColourSet::singleton(1), ColourSet::singleton(2)]).unwrap();
        let r = mod_compl(&sub, &a, 0, BUDGET).unwrap();
        assert!(accepts(&r.automaton, &a_omega()).unwrap());
        for st in &r.macrostates {
            if let RankMacrostate::Active { f, .. } | RankMacrostate::Tracking { f, .. } = &st.m {
                assert!(st.p.iter().all(|q| (f.model_of(q) as usize) < sub.models().len()));
            }
        }
    }

    #[test]
    fn every_transition_coloured_with_trivial_phi() {
        let a = Tela::new(
            Tela::aps_named(1),
            2,
            [0],
            1,
            F::Fin(0),
            [Transition::new(0, 0, 1, [0]), Transition::new(1, 1, 0, [0]), Transition::new(1, 0, 1, [0])],
        )
        .unwrap();
        let c = mod_compl(&SubTrue, &a, 0, BUDGET).unwrap();
        assert!(c.macrostates.iter().all(|st| st.p.is_subset(st.s)));
        assert!(xor_suite(&a, &c.automaton, 2, 3).unwrap().passed());
    }

    #[test]
    fn tela_of_tt_has_empty_complement_when_runs_exist() {
        let a = Tela::new(vec![], 1, [0], 0, F::True, [Transition::new(0, 0, 0, [])]).unwrap();
        let c = complement_tela(&a, BUDGET).unwrap();
        assert!(is_empty(&c).unwrap());
    }
}
