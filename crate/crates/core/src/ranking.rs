//! Level rankings with level models, tightness and consistent successors.
//!
//! A [`LevelRanking`] stores one rank and one model index per automaton
//! state. States outside the ranking's domain hold rank 0 and the
//! lexicographically smallest model (index 0 of a sorted [`ModelFamily`]),
//! so equal rankings over equal domains compare equal.
//!
//! [`ModelFamily`]: crate::acceptance::ModelFamily

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{ColourSet, StateId, StateSet};
use crate::tela::{Symbol, Tela};

pub type Rank = u8;

/// Index into a sorted family of minimal models; 0 is the lex-least model.
pub type ModelIdx = u8;

pub const LEX: ModelIdx = 0;

/// Largest even number not above `k`.
pub fn evenceil(k: Rank) -> Rank {
    k - k % 2
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LevelRanking {
    pub ranks: Box<[Rank]>,
    pub models: Box<[ModelIdx]>,
}

impl LevelRanking {
    pub fn zero(n: usize) -> Self {
        LevelRanking { ranks: vec![0; n].into(), models: vec![LEX; n].into() }
    }

    pub fn from_parts(ranks: Vec<Rank>, models: Vec<ModelIdx>) -> Self {
        assert_eq!(ranks.len(), models.len());
        LevelRanking { ranks: ranks.into(), models: models.into() }
    }

    pub fn rank_of(&self, q: StateId) -> Rank {
        self.ranks[q as usize]
    }

    pub fn model_of(&self, q: StateId) -> ModelIdx {
        self.models[q as usize]
    }

    /// `rank(f)`: the maximal value.
    pub fn rank(&self) -> Rank {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Largest odd value, if any.
    pub fn max_odd(&self) -> Option<Rank> {
        self.ranks.iter().copied().filter(|r| r % 2 == 1).max()
    }

    /// States of `dom` with rank `v`.
    pub fn preimage(&self, dom: StateSet, v: Rank) -> StateSet {
        dom.iter().filter(|&q| self.rank_of(q) == v).collect()
    }

    /// Every rank outside `dom` is 0 with the lex model, and inside `dom`
    /// even ranks carry the lex model.
    pub fn is_consistent(&self, dom: StateSet, num_models: usize) -> bool {
        (0..self.ranks.len() as StateId).all(|q| {
            let (r, m) = (self.rank_of(q), self.model_of(q));
            if !dom.contains(q) {
                r == 0 && m == LEX
            } else if r % 2 == 0 {
                m == LEX
            } else {
                (m as usize) < num_models
            }
        })
    }

    /// `(S, μ)`-tightness: odd maximum `r` over `dom`, every odd value up to
    /// `r` used within `dom`, rank 0 outside, consistent models.
    pub fn is_tight(&self, dom: StateSet, num_models: usize) -> bool {
        self.tight_bound(dom, num_models, Shape::Strict).is_some()
    }

    /// Relaxed tightness: the largest odd value `R` exists, every odd value up
    /// to `R` is used and no value exceeds `R + 1`.
    pub fn is_relaxed_tight(&self, dom: StateSet, num_models: usize) -> bool {
        self.tight_bound(dom, num_models, Shape::Relaxed).is_some()
    }

    /// The characteristic odd rank under `shape`, if the ranking has it.
    pub fn tight_bound(&self, dom: StateSet, num_models: usize, shape: Shape) -> Option<Rank> {
        if !self.is_consistent(dom, num_models) {
            return None;
        }
        let r = self.max_odd()?;
        let limit = match shape {
            Shape::Strict => r,
            Shape::Relaxed => r + 1,
        };
        if self.rank() > limit {
            return None;
        }
        let covered = (1..=r).step_by(2).all(|v| dom.iter().any(|q| self.rank_of(q) == v));
        covered.then_some(r)
    }

    /// Human-readable form, e.g. `[0:1/{0}, 1:2]` listing the domain.
    pub fn describe(&self, dom: StateSet, models: &[ColourSet]) -> String {
        let parts: Vec<String> = dom
            .iter()
            .map(|q| {
                let r = self.rank_of(q);
                if r % 2 == 1 {
                    format!("{q}:{r}/{}", models[self.model_of(q) as usize])
                } else {
                    format!("{q}:{r}")
                }
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Debug for LevelRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.ranks, self.models)
    }
}

/// Which tightness the enumerated rankings must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Maximum is the odd rank `r` itself.
    Strict,
    /// Values may reach `r + 1` above the largest odd value `r`.
    Relaxed,
}

/// The transition relation and model family against which consistent
/// successors are computed.
#[derive(Clone, Copy, Debug)]
pub struct RankingContext<'a> {
    pub aut: &'a Tela,
    /// Transitions carrying any of these colours are ignored (`Δ`).
    pub avoid: ColourSet,
    /// Minimal models, lex-least first.
    pub models: &'a [ColourSet],
}

impl<'a> RankingContext<'a> {
    pub fn new(aut: &'a Tela, avoid: ColourSet, models: &'a [ColourSet]) -> Result<Self> {
        aut.require_small()?;
        if models.is_empty() {
            return Err(Error::NoModels);
        }
        if models.len() > ModelIdx::MAX as usize {
            return Err(Error::ShapeMismatch(format!("{} minimal models", models.len())));
        }
        Ok(RankingContext { aut, avoid, models })
    }

    fn n(&self) -> usize {
        self.aut.num_states()
    }

    /// `(f, μ) ⊑_a (f', μ')` over the transitions from `dom`: ranks never
    /// grow, and they drop to the even floor when a transition hits the
    /// source's model or the model changes.
    pub fn consistent_successor(&self, dom: StateSet, f: &LevelRanking, a: Symbol, g: &LevelRanking) -> bool {
        dom.iter().all(|q| {
            let (r, m) = (f.rank_of(q), f.model_of(q));
            self.aut.succ(q, a).iter().filter(|(_, c)| !c.intersects(self.avoid)).all(|&(d, c)| {
                let r2 = g.rank_of(d);
                let must_drop = c.intersects(self.models[m as usize]) || g.model_of(d) != m;
                r2 <= r && (!must_drop || r2 <= evenceil(r))
            })
        })
    }

    /// Upper bound for the rank of `d` under model `m2`, given the ranked
    /// predecessors in `dom`; `None` when `d` has no predecessor.
    fn bound(&self, dom: StateSet, f: &LevelRanking, a: Symbol, d: StateId, m2: ModelIdx) -> Option<Rank> {
        let mut best: Option<Rank> = None;
        for q in dom.iter() {
            let (r, m) = (f.rank_of(q), f.model_of(q));
            for &(d2, c) in self.aut.succ(q, a) {
                if d2 != d || c.intersects(self.avoid) {
                    continue;
                }
                let drop = c.intersects(self.models[m as usize]) || m2 != m;
                let b = if drop { evenceil(r) } else { r };
                best = Some(best.map_or(b, |x| x.min(b)));
            }
        }
        best
    }

    /// Every ranking over `new_dom` of shape `shape` with characteristic odd
    /// rank `r` that is a consistent successor of `f` (over `dom`) on `a`.
    /// States of `new_dom` without a predecessor in `dom` are unconstrained.
    pub fn successors(
        &self,
        dom: StateSet,
        f: &LevelRanking,
        a: Symbol,
        new_dom: StateSet,
        r: Rank,
        shape: Shape,
    ) -> Vec<LevelRanking> {
        let limit = self.limit(r, shape);
        let options: Vec<Vec<(Rank, ModelIdx)>> = new_dom
            .iter()
            .map(|d| {
                let mut opts = Vec::new();
                for v in 0..=limit {
                    if v % 2 == 0 {
                        if self.bound(dom, f, a, d, LEX).is_none_or(|b| v <= b) {
                            opts.push((v, LEX));
                        }
                    } else {
                        for m in 0..self.models.len() as ModelIdx {
                            if self.bound(dom, f, a, d, m).is_none_or(|b| v <= b) {
                                opts.push((v, m));
                            }
                        }
                    }
                }
                opts
            })
            .collect();
        self.assemble(new_dom, &options, r)
    }

    /// Every ranking over `dom` of shape `shape`, for every odd rank below
    /// `2|dom|`.
    pub fn fresh(&self, dom: StateSet, shape: Shape) -> Vec<LevelRanking> {
        self.fresh_all(dom, shape).into_iter().map(|(_, f)| f).collect()
    }

    /// As [`fresh`](Self::fresh), paired with the odd rank.
    pub fn fresh_all(&self, dom: StateSet, shape: Shape) -> Vec<(Rank, LevelRanking)> {
        let mut out = Vec::new();
        for r in (1..2 * dom.len() as Rank).step_by(2) {
            out.extend(self.fresh_with_rank(dom, r, shape).into_iter().map(|f| (r, f)));
        }
        out
    }

    pub fn fresh_with_rank(&self, dom: StateSet, r: Rank, shape: Shape) -> Vec<LevelRanking> {
        let limit = self.limit(r, shape);
        let mut opts = Vec::new();
        for v in 0..=limit {
            if v % 2 == 0 {
                opts.push((v, LEX));
            } else {
                opts.extend((0..self.models.len() as ModelIdx).map(|m| (v, m)));
            }
        }
        let options = vec![opts; dom.len()];
        self.assemble(dom, &options, r)
    }

    fn limit(&self, r: Rank, shape: Shape) -> Rank {
        match shape {
            Shape::Strict => r,
            Shape::Relaxed => r + 1,
        }
    }

    /// Cartesian product of per-state options covering every odd value up
    /// to `r`.
    ///
    /// All states sharing an odd rank also share a model. The canonical
    /// labelling assigns each odd rank in one round with one model, so this
    /// loses no accepting run, and it divides the number of guesses by up to
    /// `models^(|dom| - odd ranks)`.
    fn assemble(&self, dom: StateSet, options: &[Vec<(Rank, ModelIdx)>], r: Rank) -> Vec<LevelRanking> {
        let states: Vec<StateId> = dom.iter().collect();
        let need: u32 = (0..=(r as u32 / 2)).fold(0, |acc, j| acc | 1 << j);
        let mut out = Vec::new();
        let mut cur = LevelRanking::zero(self.n());
        let mut by_rank = [None; 128];
        #[allow(clippy::too_many_arguments)]
        fn go(
            idx: usize,
            covered: u32,
            need: u32,
            states: &[StateId],
            options: &[Vec<(Rank, ModelIdx)>],
            by_rank: &mut [Option<ModelIdx>; 128],
            cur: &mut LevelRanking,
            out: &mut Vec<LevelRanking>,
        ) {
            if idx == states.len() {
                if covered == need {
                    out.push(cur.clone());
                }
                return;
            }
            let missing = (need & !covered).count_ones() as usize;
            if missing > states.len() - idx {
                return;
            }
            let q = states[idx] as usize;
            for &(v, m) in &options[idx] {
                let slot = (v / 2) as usize;
                let claimed = v % 2 == 1 && by_rank[slot].is_none();
                if v % 2 == 1 && by_rank[slot].is_some_and(|m0| m0 != m) {
                    continue;
                }
                if claimed {
                    by_rank[slot] = Some(m);
                }
                cur.ranks[q] = v;
                cur.models[q] = m;
                let bit = if v % 2 == 1 { 1 << (v / 2) } else { 0 };
                go(idx + 1, covered | (bit & need), need, states, options, by_rank, cur, out);
                if claimed {
                    by_rank[slot] = None;
                }
            }
            cur.ranks[q] = 0;
            cur.models[q] = LEX;
        }
        go(0, 0, need, &states, options, &mut by_rank, &mut cur, &mut out);
        out
    }
}

/// Exact number of tight rankings of `n` states (all states in the domain,
/// models ignored): `Σ_r Σ_j (-1)^j C(m,j) (r+1-j)^n` over odd `r < 2n`,
/// where `m = (r+1)/2` odd values must all be hit.
pub fn count_tight(n: u32) -> Result<u128> {
    if n == 0 || n > 20 {
        return Err(Error::Usage(format!("count_tight supports 1..=20 states, got {n}")));
    }
    let overflow = || Error::Usage(format!("count_tight({n}) overflows"));
    let mut total: i128 = 0;
    for r in (1..2 * n).step_by(2) {
        let m = r.div_ceil(2);
        let mut binom: i128 = 1;
        for j in 0..=m {
            let base = i128::from(r + 1 - j);
            let term = base.checked_pow(n).ok_or_else(overflow)?.checked_mul(binom).ok_or_else(overflow)?;
            total = if j % 2 == 0 { total.checked_add(term) } else { total.checked_sub(term) }.ok_or_else(overflow)?;
            binom = binom * i128::from(m - j) / i128::from(j + 1);
        }
    }
    Ok(total as u128)
}

/// [`count_tight`] by exhaustive enumeration of `{0..2n}^n`.
pub fn count_tight_brute(n: u32) -> u128 {
    let n = n as usize;
    let base = 2 * n + 1;
    let dom = StateSet::full(n);
    let mut f = LevelRanking::zero(n);
    let mut count = 0;
    for code in 0..base.pow(n as u32) {
        let mut c = code;
        for q in 0..n {
            f.ranks[q] = (c % base) as Rank;
            c /= base;
        }
        // only the lex model is used, so odd states are trivially consistent
        if f.is_tight(dom, 1) {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceFormula as F;
    use crate::tela::Transition;

    fn set(qs: &[StateId]) -> StateSet {
        qs.iter().copied().collect()
    }

    #[test]
    fn evenceil_values() {
        assert_eq!(evenceil(0), 0);
        assert_eq!(evenceil(1), 0);
        assert_eq!(evenceil(4), 4);
        assert_eq!(evenceil(5), 4);
    }

    #[test]
    fn tightness_examples() {
        let f = LevelRanking::from_parts(vec![1], vec![0]);
        assert!(f.is_tight(set(&[0]), 1));
        assert!(!LevelRanking::zero(1).is_tight(set(&[0]), 1));
        let gap = LevelRanking::from_parts(vec![3, 0], vec![0, 0]);
        assert!(!gap.is_tight(set(&[0, 1]), 1));
        let outside = LevelRanking::from_parts(vec![1, 1], vec![0, 0]);
        assert!(!outside.is_tight(set(&[0]), 1));
        let relaxed = LevelRanking::from_parts(vec![1, 2], vec![0, 0]);
        assert!(!relaxed.is_tight(set(&[0, 1]), 1));
        assert!(relaxed.is_relaxed_tight(set(&[0, 1]), 1));
    }

    #[test]
    fn two_state_tight_rankings() {
        let mut found = Vec::new();
        for a in 0..=4u8 {
            for b in 0..=4u8 {
                let f = LevelRanking::from_parts(vec![a, b], vec![0, 0]);
                if f.is_tight(set(&[0, 1]), 1) {
                    found.push((a, b));
                }
            }
        }
        found.sort();
        assert_eq!(found, vec![(0, 1), (1, 0), (1, 1), (1, 3), (3, 1)]);
    }

    #[test]
    fn count_tight_small() {
        assert_eq!(count_tight(1).unwrap(), 1);
        assert_eq!(count_tight(2).unwrap(), 5);
        for n in 1..=5 {
            assert_eq!(count_tight(n).unwrap(), count_tight_brute(n), "n = {n}");
        }
        let mut prev = 0;
        for n in 1..=8u32 {
            let t = count_tight(n).unwrap();
            assert!(t > prev);
            assert!(t <= u128::from(2 * n + 1).pow(n));
            prev = t;
        }
    }

    fn one_loop(colours: &[u32]) -> Tela {
        Tela::new(vec![], 1, [0], 1, F::Inf(0), [Transition::new(0, 0, 0, colours.iter().copied())]).unwrap()
    }

    #[test]
    fn successor_examples() {
        let models = [ColourSet::singleton(0)];
        let coloured = one_loop(&[0]);
        let ctx = RankingContext::new(&coloured, ColourSet::EMPTY, &models).unwrap();
        let f1 = LevelRanking::from_parts(vec![1], vec![0]);
        // a hit colour of the model forces a drop from 1 to 0
        assert!(!ctx.consistent_successor(set(&[0]), &f1, 0, &f1));
        let plain = one_loop(&[]);
        let ctx = RankingContext::new(&plain, ColourSet::EMPTY, &models).unwrap();
        let f2 = LevelRanking::from_parts(vec![2], vec![0]);
        assert!(ctx.consistent_successor(set(&[0]), &f2, 0, &f2));
        // no transitions on the letter: vacuous
        let empty = Tela::new(vec![], 1, [0], 1, F::Inf(0), []).unwrap();
        let ctx = RankingContext::new(&empty, ColourSet::EMPTY, &models).unwrap();
        assert!(ctx.consistent_successor(set(&[0]), &f1, 0, &f2));
    }

    #[test]
    fn enumerator_matches_definition() {
        // 3 states, 2 models, mixed colours
        let aut = Tela::new(
            Tela::aps_named(1),
            3,
            [0],
            2,
            F::and([F::Inf(0), F::Inf(1)]),
            [
                Transition::new(0, 0, 1, [0]),
                Transition::new(0, 0, 2, []),
                Transition::new(1, 0, 1, [1]),
                Transition::new(2, 0, 0, []),
                Transition::new(2, 0, 2, [0, 1]),
            ],
        )
        .unwrap();
        let models = [ColourSet::singleton(0), ColourSet::singleton(1)];
        let ctx = RankingContext::new(&aut, ColourSet::EMPTY, &models).unwrap();
        let all = StateSet::full(3);
        for f in ctx.fresh(all, Shape::Strict) {
            let r = f.rank();
            let mut expected = Vec::new();
            for g in ctx.fresh_with_rank(all, r, Shape::Strict) {
                if ctx.consistent_successor(all, &f, 0, &g) {
                    expected.push(g);
                }
            }
            let mut got = ctx.successors(all, &f, 0, all, r, Shape::Strict);
            got.sort();
            expected.sort();
            assert_eq!(got, expected);
            assert!(got.iter().all(|g| g.is_tight(all, 2)));
        }
    }

    #[test]
    fn fresh_counts_match_count_tight() {
        let aut = Tela::new(vec![], 3, [0], 1, F::Inf(0), []).unwrap();
        let models = [ColourSet::singleton(0)];
        let ctx = RankingContext::new(&aut, ColourSet::EMPTY, &models).unwrap();
        assert_eq!(ctx.fresh(StateSet::full(3), Shape::Strict).len() as u128, count_tight(3).unwrap());
    }
}
