//! Emerson-Lei acceptance formulas over transition colours.
//!
//! A formula is evaluated against the set of colours a run sees infinitely
//! often. Inf-only formulas have a propositional *dual* whose models are the
//! colour sets that must be seen only finitely often to break the formula;
//! the rank-based constructions guess one minimal dual model per run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{Colour, ColourSet, MAX_COLOURS};
use crate::tela::Tela;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AcceptanceFormula {
    True,
    False,
    Fin(Colour),
    Inf(Colour),
    And(Vec<AcceptanceFormula>),
    Or(Vec<AcceptanceFormula>),
}

/// Propositional formula over colours, produced by dualisation.
///
/// `Var(c)` reads "colour `c` is broken" (seen finitely often); `NotVar(c)`
/// only arises when dualising a `Fin` atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropFormula {
    True,
    False,
    Var(Colour),
    NotVar(Colour),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
}

/// A family of colour sets, kept sorted in the lexicographic set order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModelFamily(Vec<ColourSet>);

impl ModelFamily {
    pub fn new(mut sets: Vec<ColourSet>) -> Self {
        sets.sort();
        sets.dedup();
        ModelFamily(sets)
    }

    pub fn as_slice(&self) -> &[ColourSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, m: ColourSet) -> bool {
        self.0.binary_search(&m).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ColourSet> + '_ {
        self.0.iter().copied()
    }

    /// No member is a strict subset of another.
    pub fn is_antichain(&self) -> bool {
        self.0.iter().all(|a| {
            self.0
                .iter()
                .all(|b| a == b || !a.is_subset(*b) || a.bits() == b.bits())
        })
    }

    /// Every superset (within `{0..k-1}`) of some member.
    pub fn upward_closure(&self, k: u32) -> ModelFamily {
        let all = ColourSet::full(k);
        ModelFamily::new(
            all.subsets()
                .filter(|m| self.0.iter().any(|b| b.is_subset(*m)))
                .collect(),
        )
    }
}

/// One disjunct `Fin(B) & Inf(G_0) & ... & Inf(G_{m-1})` of a generalized
/// Rabin condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenRabinPair {
    /// The original Fin colours of the clause (possibly empty).
    pub fin: ColourSet,
    /// The single colour standing for `fin` in the rewritten automaton: the
    /// colour itself for a singleton, a fresh fused colour otherwise.
    pub fin_colour: Option<Colour>,
    /// One colour set per Inf atom; an atom is satisfied by any member.
    pub inf: Vec<ColourSet>,
}

impl GenRabinPair {
    /// The `Inf` part as a formula.
    pub fn inf_formula(&self) -> AcceptanceFormula {
        AcceptanceFormula::And(
            self.inf
                .iter()
                .map(|g| AcceptanceFormula::Or(g.iter().map(AcceptanceFormula::Inf).collect()))
                .collect(),
        )
        .normalized()
    }
}

/// Syntactic class of an acceptance formula, most specific first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AccClass {
    Buchi,
    CoBuchi,
    #[serde(rename = "GBA")]
    Gba,
    #[serde(rename = "GCBA")]
    Gcba,
    Rabin,
    ParityMinOdd,
    GenRabin,
    InfOnly,
    FinOnly,
    #[serde(rename = "GeneralEL")]
    GeneralEl,
}

impl fmt::Display for AccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AccClass::Buchi => "Buchi",
            AccClass::CoBuchi => "CoBuchi",
            AccClass::Gba => "GBA",
            AccClass::Gcba => "GCBA",
            AccClass::Rabin => "Rabin",
            AccClass::ParityMinOdd => "ParityMinOdd",
            AccClass::GenRabin => "GenRabin",
            AccClass::InfOnly => "InfOnly",
            AccClass::FinOnly => "FinOnly",
            AccClass::GeneralEl => "GeneralEL",
        };
        f.write_str(s)
    }
}

impl AcceptanceFormula {
    pub fn inf(c: Colour) -> Self {
        AcceptanceFormula::Inf(c)
    }

    pub fn fin(c: Colour) -> Self {
        AcceptanceFormula::Fin(c)
    }

    pub fn and(children: impl IntoIterator<Item = AcceptanceFormula>) -> Self {
        AcceptanceFormula::And(children.into_iter().collect())
    }

    pub fn or(children: impl IntoIterator<Item = AcceptanceFormula>) -> Self {
        AcceptanceFormula::Or(children.into_iter().collect())
    }

    /// `Inf(0) & ... & Inf(k-1)`; `t` for `k = 0`.
    pub fn generalized_buchi(k: u32) -> Self {
        AcceptanceFormula::and((0..k).map(AcceptanceFormula::Inf)).normalized()
    }

    /// `Fin(0) & (Inf(1) | (Fin(2) & (Inf(3) | ...)))` over `k` colours.
    pub fn parity_min_odd(k: u32) -> Self {
        fn chain(c: u32, k: u32) -> AcceptanceFormula {
            if c + 1 >= k {
                return if c.is_multiple_of(2) {
                    AcceptanceFormula::Fin(c)
                } else {
                    AcceptanceFormula::Inf(c)
                };
            }
            let rest = chain(c + 1, k);
            if c.is_multiple_of(2) {
                AcceptanceFormula::and([AcceptanceFormula::Fin(c), rest])
            } else {
                AcceptanceFormula::or([AcceptanceFormula::Inf(c), rest])
            }
        }
        if k == 0 {
            AcceptanceFormula::True
        } else {
            chain(0, k).normalized()
        }
    }

    /// Number of atoms, counted with multiplicity.
    pub fn size(&self) -> usize {
        match self {
            AcceptanceFormula::True | AcceptanceFormula::False => 0,
            AcceptanceFormula::Fin(_) | AcceptanceFormula::Inf(_) => 1,
            AcceptanceFormula::And(ch) | AcceptanceFormula::Or(ch) => ch.iter().map(Self::size).sum(),
        }
    }

    /// Every colour mentioned by an atom.
    pub fn colours(&self) -> ColourSet {
        match self {
            AcceptanceFormula::True | AcceptanceFormula::False => ColourSet::EMPTY,
            AcceptanceFormula::Fin(c) | AcceptanceFormula::Inf(c) => ColourSet::singleton(*c),
            AcceptanceFormula::And(ch) | AcceptanceFormula::Or(ch) => {
                ch.iter().fold(ColourSet::EMPTY, |acc, x| acc.union(x.colours()))
            }
        }
    }

    /// Colours occurring under a `Fin` atom.
    pub fn fin_colours(&self) -> ColourSet {
        match self {
            AcceptanceFormula::Fin(c) => ColourSet::singleton(*c),
            AcceptanceFormula::And(ch) | AcceptanceFormula::Or(ch) => {
                ch.iter().fold(ColourSet::EMPTY, |acc, x| acc.union(x.fin_colours()))
            }
            _ => ColourSet::EMPTY,
        }
    }

    pub fn has_fin(&self) -> bool {
        !self.fin_colours().is_empty()
    }

    pub fn is_inf_only(&self) -> bool {
        !self.has_fin()
    }

    pub fn check_colours(&self, count: u32) -> Result<()> {
        if count > MAX_COLOURS {
            return Err(Error::TooManyColours(count));
        }
        match self.colours().iter().find(|c| *c >= count) {
            Some(colour) => Err(Error::ColourOutOfRange { colour, count }),
            None => Ok(()),
        }
    }

    /// Does the set of infinitely-often colours `m` satisfy the formula?
    pub fn satisfied_by(&self, m: ColourSet) -> bool {
        match self {
            AcceptanceFormula::True => true,
            AcceptanceFormula::False => false,
            AcceptanceFormula::Fin(c) => !m.contains(*c),
            AcceptanceFormula::Inf(c) => m.contains(*c),
            AcceptanceFormula::And(ch) => ch.iter().all(|x| x.satisfied_by(m)),
            AcceptanceFormula::Or(ch) => ch.iter().any(|x| x.satisfied_by(m)),
        }
    }

    /// Renames colours through `map`.
    pub fn map_colours(&self, map: &impl Fn(Colour) -> Colour) -> Self {
        match self {
            AcceptanceFormula::True => AcceptanceFormula::True,
            AcceptanceFormula::False => AcceptanceFormula::False,
            AcceptanceFormula::Fin(c) => AcceptanceFormula::Fin(map(*c)),
            AcceptanceFormula::Inf(c) => AcceptanceFormula::Inf(map(*c)),
            AcceptanceFormula::And(ch) => AcceptanceFormula::And(ch.iter().map(|x| x.map_colours(map)).collect()),
            AcceptanceFormula::Or(ch) => AcceptanceFormula::Or(ch.iter().map(|x| x.map_colours(map)).collect()),
        }
    }

    /// Flattens nested conjunctions/disjunctions, folds constants, removes
    /// duplicate children and sorts children canonically.
    pub fn normalized(&self) -> Self {
        match self {
            AcceptanceFormula::And(ch) => Self::normalize_junction(ch, true),
            AcceptanceFormula::Or(ch) => Self::normalize_junction(ch, false),
            other => other.clone(),
        }
    }

    fn normalize_junction(children: &[AcceptanceFormula], conj: bool) -> Self {
        let (unit, zero) = if conj {
            (AcceptanceFormula::True, AcceptanceFormula::False)
        } else {
            (AcceptanceFormula::False, AcceptanceFormula::True)
        };
        let mut flat = Vec::new();
        for child in children {
            let child = child.normalized();
            match child {
                AcceptanceFormula::And(inner) if conj => flat.extend(inner),
                AcceptanceFormula::Or(inner) if !conj => flat.extend(inner),
                c if c == zero => return zero,
                c if c == unit => {}
                c => flat.push(c),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => unit,
            1 => flat.pop().unwrap(),
            _ if conj => AcceptanceFormula::And(flat),
            _ => AcceptanceFormula::Or(flat),
        }
    }

    /// The dual of an Inf-only formula: `Inf(c)` becomes `c`, conjunctions
    /// and disjunctions swap, `t` and `f` swap.
    pub fn dual(&self) -> Result<PropFormula> {
        if self.has_fin() {
            return Err(Error::ShapeMismatch(
                "dual of a formula with Fin atoms requires the generalized reading".into(),
            ));
        }
        Ok(self.dual_generalized())
    }

    /// Dual through negation normal form; `Fin(c)` becomes `!c`.
    pub fn dual_generalized(&self) -> PropFormula {
        match self {
            AcceptanceFormula::True => PropFormula::False,
            AcceptanceFormula::False => PropFormula::True,
            AcceptanceFormula::Inf(c) => PropFormula::Var(*c),
            AcceptanceFormula::Fin(c) => PropFormula::NotVar(*c),
            AcceptanceFormula::And(ch) => PropFormula::Or(ch.iter().map(Self::dual_generalized).collect()),
            AcceptanceFormula::Or(ch) => PropFormula::And(ch.iter().map(Self::dual_generalized).collect()),
        }
    }

    /// All models of the dual over colours `{0..k-1}`.
    pub fn models(&self, k: u32) -> ModelFamily {
        let dual = self.dual_generalized();
        ModelFamily::new(ColourSet::full(k).subsets().filter(|m| dual.eval(*m)).collect())
    }

    /// Inclusion-minimal models of the dual over colours `{0..k-1}`.
    ///
    /// Minimal models only mention colours of the formula, so only those are
    /// enumerated; `k` bounds them.
    pub fn minimal_models(&self, k: u32) -> ModelFamily {
        let dual = self.dual_generalized();
        let relevant = self.colours().intersection(ColourSet::full(k));
        let all: Vec<ColourSet> = relevant.subsets().filter(|m| dual.eval(*m)).collect();
        let min = all
            .iter()
            .copied()
            .filter(|m| !all.iter().any(|o| o != m && o.is_subset(*m)))
            .collect();
        ModelFamily::new(min)
    }

    /// The lexicographically smallest minimal model.
    pub fn lex_min_model(&self, k: u32) -> Result<ColourSet> {
        lex_min(&self.minimal_models(k))
    }

    /// Disjunctive normal form as generalized Rabin clauses, before colour
    /// fusion. Contradictory clauses are dropped and absorbed clauses removed.
    pub fn dnf(&self) -> Vec<Clause> {
        let mut clauses = match self {
            AcceptanceFormula::True => vec![Clause::default()],
            AcceptanceFormula::False => vec![],
            AcceptanceFormula::Fin(c) => vec![Clause {
                fin: ColourSet::singleton(*c),
                inf: ColourSet::EMPTY,
            }],
            AcceptanceFormula::Inf(c) => vec![Clause {
                fin: ColourSet::EMPTY,
                inf: ColourSet::singleton(*c),
            }],
            AcceptanceFormula::Or(ch) => ch.iter().flat_map(|x| x.dnf()).collect(),
            AcceptanceFormula::And(ch) => {
                let mut acc = vec![Clause::default()];
                for child in ch {
                    let rhs = child.dnf();
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for a in &acc {
                        for b in &rhs {
                            next.push(Clause {
                                fin: a.fin.union(b.fin),
                                inf: a.inf.union(b.inf),
                            });
                        }
                    }
                    acc = simplify_clauses(next);
                }
                acc
            }
        };
        clauses = simplify_clauses(clauses);
        clauses
    }

    /// Most specific syntactic class after normalisation.
    pub fn classify(&self) -> AccClass {
        use AcceptanceFormula as F;
        let f = self.normalized();
        let is_inf = |x: &F| matches!(x, F::Inf(_));
        let is_fin = |x: &F| matches!(x, F::Fin(_));
        match &f {
            F::Inf(_) => return AccClass::Buchi,
            F::Fin(_) => return AccClass::CoBuchi,
            F::And(ch) if ch.iter().all(is_inf) => return AccClass::Gba,
            F::Or(ch) if ch.iter().all(is_fin) => return AccClass::Gcba,
            _ => {}
        }
        let rabin_pair = |x: &F| match x {
            F::And(ch) => ch.len() == 2 && ch.iter().filter(|y| is_fin(y)).count() == 1 && ch.iter().filter(|y| is_inf(y)).count() == 1,
            _ => false,
        };
        let gen_rabin_pair = |x: &F| match x {
            F::Fin(_) => true,
            F::And(ch) => ch.iter().filter(|y| is_fin(y)).count() == 1 && ch.iter().all(|y| is_fin(y) || is_inf(y)),
            _ => false,
        };
        if rabin_pair(&f) {
            return AccClass::Rabin;
        }
        if let F::Or(ch) = &f {
            if ch.iter().all(rabin_pair) {
                return AccClass::Rabin;
            }
        }
        if is_parity_min_odd(&f) {
            return AccClass::ParityMinOdd;
        }
        if gen_rabin_pair(&f) {
            return AccClass::GenRabin;
        }
        if let F::Or(ch) = &f {
            if ch.iter().all(gen_rabin_pair) {
                return AccClass::GenRabin;
            }
        }
        if !f.has_fin() {
            return AccClass::InfOnly;
        }
        if no_inf(&f) {
            return AccClass::FinOnly;
        }
        AccClass::GeneralEl
    }
}

fn no_inf(f: &AcceptanceFormula) -> bool {
    match f {
        AcceptanceFormula::Inf(_) => false,
        AcceptanceFormula::And(ch) | AcceptanceFormula::Or(ch) => ch.iter().all(no_inf),
        _ => true,
    }
}

/// Matches `Fin(c) & (Inf(c+1) | (Fin(c+2) & ...))` starting at colour 0,
/// modulo the canonical child order.
fn is_parity_min_odd(f: &AcceptanceFormula) -> bool {
    use AcceptanceFormula as F;
    fn level(f: &F, c: Colour) -> bool {
        let (atom_ok, rest): (fn(&F, Colour) -> bool, _) = if c.is_multiple_of(2) {
            (|x, c| *x == F::Fin(c), match f {
                F::And(ch) => Some(ch),
                _ => None,
            })
        } else {
            (|x, c| *x == F::Inf(c), match f {
                F::Or(ch) => Some(ch),
                _ => None,
            })
        };
        if atom_ok(f, c) {
            return true;
        }
        match rest {
            Some(ch) if ch.len() == 2 => {
                let atom = ch.iter().position(|x| atom_ok(x, c));
                match atom {
                    Some(i) => level(&ch[1 - i], c + 1),
                    None => false,
                }
            }
            _ => false,
        }
    }
    // A lone Fin(0) is co-Büchi and is classified earlier.
    matches!(f, F::And(_)) && level(f, 0)
}

/// A DNF clause `Fin(fin) & Inf(c) for c in inf`; `Fin` of a set means every
/// member is seen finitely often.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub fin: ColourSet,
    pub inf: ColourSet,
}

impl Clause {
    fn atoms_subset(&self, other: &Clause) -> bool {
        self.fin.is_subset(other.fin) && self.inf.is_subset(other.inf)
    }

    pub fn satisfied_by(&self, m: ColourSet) -> bool {
        !m.intersects(self.fin) && self.inf.is_subset(m)
    }
}

fn simplify_clauses(mut clauses: Vec<Clause>) -> Vec<Clause> {
    clauses.retain(|c| !c.fin.intersects(c.inf));
    clauses.sort();
    clauses.dedup();
    let keep: Vec<bool> = clauses
        .iter()
        .enumerate()
        .map(|(i, c)| {
            !clauses
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && d.atoms_subset(c) && d != c)
        })
        .collect();
    clauses
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

impl PropFormula {
    pub fn eval(&self, m: ColourSet) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Var(c) => m.contains(*c),
            PropFormula::NotVar(c) => !m.contains(*c),
            PropFormula::And(ch) => ch.iter().all(|x| x.eval(m)),
            PropFormula::Or(ch) => ch.iter().any(|x| x.eval(m)),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::True => write!(f, "t"),
            PropFormula::False => write!(f, "f"),
            PropFormula::Var(c) => write!(f, "{c}"),
            PropFormula::NotVar(c) => write!(f, "!{c}"),
            PropFormula::And(ch) | PropFormula::Or(ch) => {
                let sep = if matches!(self, PropFormula::And(_)) { " & " } else { " | " };
                for (i, x) in ch.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    if matches!(x, PropFormula::And(_) | PropFormula::Or(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Validating entry point: does `m` satisfy `alpha` over `k` colours?
pub fn evaluate(m: ColourSet, alpha: &AcceptanceFormula, k: u32) -> Result<bool> {
    alpha.check_colours(k)?;
    if let Some(colour) = m.iter().find(|c| *c >= k) {
        return Err(Error::ColourOutOfRange { colour, count: k });
    }
    Ok(alpha.satisfied_by(m))
}

/// Smallest member of a model family in the lexicographic set order.
pub fn lex_min(family: &ModelFamily) -> Result<ColourSet> {
    family.iter().min().ok_or(Error::NoModels)
}

/// Rewrites the acceptance condition of `aut` into generalized Rabin form.
///
/// Each clause whose Fin part has several colours gets one fresh colour,
/// placed on every transition that carries any member; the state structure is
/// untouched.
pub fn to_gen_rabin(aut: &Tela) -> Result<(Tela, Vec<GenRabinPair>)> {
    let clauses = aut.acceptance().dnf();
    let mut fused: BTreeMap<ColourSet, Colour> = BTreeMap::new();
    let mut next = aut.num_colours();
    let mut pairs = Vec::with_capacity(clauses.len());
    for clause in &clauses {
        let fin_colour = match clause.fin.len() {
            0 => None,
            1 => clause.fin.iter().next(),
            _ => Some(*fused.entry(clause.fin).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            })),
        };
        pairs.push(GenRabinPair {
            fin: clause.fin,
            fin_colour,
            inf: clause.inf.iter().map(ColourSet::singleton).collect(),
        });
    }
    if next > MAX_COLOURS {
        return Err(Error::TooManyColours(next));
    }
    let formula = AcceptanceFormula::or(pairs.iter().map(|p| {
        let mut atoms: Vec<_> = p.fin_colour.into_iter().map(AcceptanceFormula::Fin).collect();
        atoms.push(p.inf_formula());
        AcceptanceFormula::and(atoms)
    }));
    let rewritten = aut.recoloured(next, formula, |colours| {
        let mut out = colours;
        for (set, c) in &fused {
            if colours.intersects(*set) {
                out.insert(*c);
            }
        }
        out
    })?;
    Ok((rewritten, pairs))
}

impl fmt::Display for AcceptanceFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcceptanceFormula::True => f.write_str("t"),
            AcceptanceFormula::False => f.write_str("f"),
            AcceptanceFormula::Fin(c) => write!(f, "Fin({c})"),
            AcceptanceFormula::Inf(c) => write!(f, "Inf({c})"),
            AcceptanceFormula::And(ch) | AcceptanceFormula::Or(ch) => {
                let conj = matches!(self, AcceptanceFormula::And(_));
                if ch.is_empty() {
                    return f.write_str(if conj { "t" } else { "f" });
                }
                for (i, x) in ch.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if conj { " & " } else { " | " })?;
                    }
                    if matches!(x, AcceptanceFormula::And(_) | AcceptanceFormula::Or(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for AcceptanceFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::hoa::parse_acceptance(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AcceptanceFormula as F;

    fn set(cs: &[u32]) -> ColourSet {
        cs.iter().copied().collect()
    }

    fn ex() -> F {
        F::and([F::Inf(0), F::or([F::Inf(1), F::Inf(2)])])
    }

    #[test]
    fn evaluate_examples() {
        assert!(evaluate(set(&[0]), &F::Inf(0), 1).unwrap());
        assert!(!evaluate(ColourSet::EMPTY, &F::False, 0).unwrap());
        assert!(!evaluate(set(&[1, 2]), &ex(), 3).unwrap());
        assert!(matches!(
            evaluate(set(&[0]), &F::Inf(3), 2),
            Err(Error::ColourOutOfRange { colour: 3, count: 2 })
        ));
    }

    #[test]
    fn dual_examples() {
        let d = ex().dual().unwrap();
        assert_eq!(d.to_string(), "0 | (1 & 2)");
        let gba = F::generalized_buchi(3).dual().unwrap();
        assert_eq!(gba.to_string(), "0 | 1 | 2");
        assert_eq!(F::True.dual().unwrap(), PropFormula::False);
        assert!(F::Fin(0).dual().is_err());
    }

    #[test]
    fn models_examples() {
        let m = ex().models(3);
        let expected = ModelFamily::new(vec![set(&[0]), set(&[1, 2]), set(&[0, 1]), set(&[0, 2]), set(&[0, 1, 2])]);
        assert_eq!(m, expected);
        assert!(F::True.models(2).is_empty());
        assert_eq!(F::Inf(0).models(1), ModelFamily::new(vec![set(&[0])]));
    }

    #[test]
    fn minimal_model_examples() {
        assert_eq!(ex().minimal_models(3), ModelFamily::new(vec![set(&[0]), set(&[1, 2])]));
        assert_eq!(
            F::generalized_buchi(2).minimal_models(2),
            ModelFamily::new(vec![set(&[0]), set(&[1])])
        );
        assert_eq!(F::Inf(0).minimal_models(1).as_slice(), &[set(&[0])]);
    }

    #[test]
    fn lex_min_examples() {
        assert_eq!(lex_min(&ModelFamily::new(vec![set(&[0]), set(&[1, 2])])).unwrap(), set(&[0]));
        assert_eq!(lex_min(&ModelFamily::new(vec![set(&[1, 2])])).unwrap(), set(&[1, 2]));
        assert_eq!(lex_min(&ModelFamily::new(vec![set(&[1]), set(&[0, 2])])).unwrap(), set(&[0, 2]));
        assert_eq!(lex_min(&ModelFamily::default()), Err(Error::NoModels));
        assert_eq!(F::True.lex_min_model(2), Err(Error::NoModels));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(F::Fin(0).classify(), AccClass::CoBuchi);
        assert_eq!(F::Inf(0).classify(), AccClass::Buchi);
        assert_eq!(F::and([F::Inf(0), F::Inf(1)]).classify(), AccClass::Gba);
        assert_eq!(F::parity_min_odd(4).classify(), AccClass::ParityMinOdd);
        assert_eq!(F::parity_min_odd(3).classify(), AccClass::ParityMinOdd);
        assert_eq!(F::or([F::Fin(0), F::Fin(1)]).classify(), AccClass::Gcba);
        let rabin = F::or([F::and([F::Fin(0), F::Inf(1)]), F::and([F::Fin(2), F::Inf(3)])]);
        assert_eq!(rabin.classify(), AccClass::Rabin);
        assert_eq!(F::and([F::Fin(0), F::Inf(1)]).classify(), AccClass::Rabin);
        let gr = F::or([F::and([F::Fin(0), F::Inf(1), F::Inf(2)]), F::Fin(3)]);
        assert_eq!(gr.classify(), AccClass::GenRabin);
        assert_eq!(ex().classify(), AccClass::InfOnly);
        assert_eq!(F::True.classify(), AccClass::InfOnly);
        assert_eq!(F::and([F::Fin(0), F::Fin(1)]).classify(), AccClass::FinOnly);
        let el = F::or([F::Fin(0), F::and([F::Inf(1), F::Inf(2)])]);
        assert_eq!(el.classify(), AccClass::GeneralEl);
    }

    #[test]
    fn normalization_flattens_and_sorts() {
        let f = F::and([F::Inf(2), F::and([F::Inf(0), F::True, F::Inf(2)])]);
        assert_eq!(f.normalized(), F::And(vec![F::Inf(0), F::Inf(2)]));
        assert_eq!(F::or([F::Inf(0), F::True]).normalized(), F::True);
        assert_eq!(F::and([F::Inf(0), F::False]).normalized(), F::False);
    }

    #[test]
    fn dnf_of_parity_has_two_pairs() {
        let clauses = F::parity_min_odd(4).dnf();
        assert_eq!(
            clauses,
            vec![
                Clause { fin: set(&[0]), inf: set(&[1]) },
                Clause { fin: set(&[0, 2]), inf: set(&[3]) },
            ]
        );
        assert_eq!(F::True.dnf(), vec![Clause::default()]);
        assert!(F::False.dnf().is_empty());
    }

    #[test]
    fn dnf_absorbs_and_drops_contradictions() {
        let f = F::or([F::Inf(0), F::and([F::Inf(0), F::Inf(1)])]);
        assert_eq!(f.dnf(), vec![Clause { fin: ColourSet::EMPTY, inf: set(&[0]) }]);
        let g = F::and([F::Fin(0), F::Inf(0)]);
        assert!(g.dnf().is_empty());
    }

    #[test]
    fn size_counts_multiplicity() {
        let f = F::or([F::Inf(0), F::and([F::Inf(0), F::Fin(1)])]);
        assert_eq!(f.size(), 3);
        assert_eq!(F::True.size(), 0);
    }
}
