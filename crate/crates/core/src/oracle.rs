//! Ground-truth semantics on ultimately periodic words.
//!
//! Acceptance of a lasso `u v^ω` and emptiness of an automaton both reduce
//! to finding a reachable cycle whose colour set satisfies the condition.
//! Only colours under `Fin` atoms need enumerating: for a fixed set `X` of
//! Fin colours allowed to recur, every SCC of the graph restricted to edges
//! whose Fin colours lie in `X` can be traversed by one cycle, and the
//! condition is monotone in the remaining colours.

use std::collections::HashMap;
use std::fmt;

use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::{EdgeFiltered, EdgeRef};
use petgraph::algo::tarjan_scc;
use rayon::prelude::*;
use serde::Serialize;

use crate::acceptance::AcceptanceFormula;
use crate::error::{Error, Result};
use crate::sets::{ColourSet, StateId};
use crate::tela::{Symbol, Tela};

/// Largest number of Fin colours the oracle enumerates subsets of.
pub const ORACLE_COLOUR_LIMIT: usize = 12;

/// The word `prefix · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LassoWord {
    pub prefix: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidWord("the period must be non-empty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    /// Parses letters written as `a`, `b`, ... against `aut`'s alphabet.
    pub fn parse(aut: &Tela, prefix: &str, period: &str) -> Result<Self> {
        let conv = |s: &str| s.chars().map(|c| aut.parse_symbol(c)).collect::<Result<Vec<_>>>();
        LassoWord::new(conv(prefix)?, conv(period)?)
    }

    /// Number of folded positions, `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol_at(&self, pos: usize) -> Symbol {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[pos - self.prefix.len()]
        }
    }

    /// Folded successor position; the last position wraps to `|u|`.
    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn check_alphabet(&self, num_symbols: usize) -> Result<()> {
        match self.prefix.iter().chain(&self.period).find(|&&a| a as usize >= num_symbols) {
            Some(a) => Err(Error::InvalidWord(format!("symbol {a} outside an alphabet of {num_symbols}"))),
            None => Ok(()),
        }
    }

    /// `(u·v, v)`.
    pub fn unrolled(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.extend(&self.period);
        LassoWord { prefix, period: self.period.clone() }
    }

    /// `(u, v·v)`.
    pub fn doubled(&self) -> Self {
        let mut period = self.period.clone();
        period.extend(&self.period);
        LassoWord { prefix: self.prefix.clone(), period }
    }

    /// Every lasso with `|u| <= max_u` and `1 <= |v| <= max_v`, sorted.
    pub fn enumerate(num_symbols: usize, max_u: usize, max_v: usize) -> Vec<LassoWord> {
        let prefixes = words_up_to(num_symbols, 0, max_u);
        let periods = words_up_to(num_symbols, 1, max_v);
        let mut out = Vec::with_capacity(prefixes.len() * periods.len());
        for u in &prefixes {
            for v in &periods {
                out.push(LassoWord { prefix: u.clone(), period: v.clone() });
            }
        }
        out.sort();
        out
    }
}

fn words_up_to(num_symbols: usize, min: usize, max: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Symbol>> = vec![vec![]];
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..num_symbols as Symbol).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.prefix {
            f.write_str(&Tela::symbol_name(a))?;
        }
        f.write_str("(")?;
        for &a in &self.period {
            f.write_str(&Tela::symbol_name(a))?;
        }
        f.write_str(")^w")
    }
}

/// The product of an automaton with the folded positions of a lasso,
/// restricted to nodes reachable from `(q0, 0)`.
#[derive(Clone, Debug)]
pub struct FoldedGraph {
    /// `(state, position)` per node, in BFS discovery order.
    pub nodes: Vec<(StateId, usize)>,
    pub index: HashMap<(StateId, usize), NodeIndex>,
    pub graph: DiGraph<(), ColourSet>,
    pub initial: Vec<NodeIndex>,
}

impl FoldedGraph {
    pub fn build(aut: &Tela, word: &LassoWord) -> Result<Self> {
        word.check_alphabet(aut.num_symbols())?;
        let mut g = FoldedGraph {
            nodes: Vec::new(),
            index: HashMap::new(),
            graph: DiGraph::new(),
            initial: Vec::new(),
        };
        let mut queue = std::collections::VecDeque::new();
        for &q in aut.initial() {
            let id = g.intern((q, 0), &mut queue);
            g.initial.push(id);
        }
        while let Some((q, pos)) = queue.pop_front() {
            let src = g.index[&(q, pos)];
            let next = word.next_pos(pos);
            for &(d, colours) in aut.succ(q, word.symbol_at(pos)) {
                let dst = g.intern((d, next), &mut queue);
                g.graph.add_edge(src, dst, colours);
            }
        }
        Ok(g)
    }

    fn intern(&mut self, key: (StateId, usize), queue: &mut std::collections::VecDeque<(StateId, usize)>) -> NodeIndex {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.graph.add_node(());
        self.index.insert(key, id);
        self.nodes.push(key);
        queue.push_back(key);
        id
    }
}

/// Reachable part of `aut` as a graph with coloured edges.
fn automaton_graph(aut: &Tela) -> DiGraph<(), ColourSet> {
    let mut g = DiGraph::new();
    let mut ids: Vec<Option<NodeIndex>> = vec![None; aut.num_states()];
    let mut stack = Vec::new();
    for &q in aut.initial() {
        if ids[q as usize].is_none() {
            ids[q as usize] = Some(g.add_node(()));
            stack.push(q);
        }
    }
    while let Some(q) = stack.pop() {
        let src = ids[q as usize].unwrap();
        for a in 0..aut.num_symbols() as Symbol {
            for &(d, colours) in aut.succ(q, a) {
                let dst = *ids[d as usize].get_or_insert_with(|| {
                    stack.push(d);
                    g.add_node(())
                });
                g.add_edge(src, dst, colours);
            }
        }
    }
    g
}

/// Is there a cycle (in a graph whose nodes are all reachable) whose colour
/// set satisfies `alpha`?
pub fn has_accepting_cycle(g: &DiGraph<(), ColourSet>, alpha: &AcceptanceFormula) -> Result<bool> {
    let used = g.edge_weights().fold(ColourSet::EMPTY, |acc, c| acc.union(*c));
    let fin = alpha.fin_colours().intersection(used);
    if fin.len() > ORACLE_COLOUR_LIMIT {
        return Err(Error::OracleColourLimit(fin.len()));
    }
    let mut comp_of = vec![usize::MAX; g.node_count()];
    for allowed in fin.subsets() {
        let keep = |c: ColourSet| c.intersection(fin).is_subset(allowed);
        let filtered = EdgeFiltered::from_fn(g, |e| keep(*e.weight()));
        let comps = tarjan_scc(&filtered);
        for (i, comp) in comps.iter().enumerate() {
            for n in comp {
                comp_of[n.index()] = i;
            }
        }
        let mut union = vec![None::<ColourSet>; comps.len()];
        for e in g.edge_references() {
            let c = *e.weight();
            if keep(c) && comp_of[e.source().index()] == comp_of[e.target().index()] {
                let slot = &mut union[comp_of[e.source().index()]];
                *slot = Some(slot.unwrap_or_default().union(c));
            }
        }
        if union.into_iter().flatten().any(|m| alpha.satisfied_by(m)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Does `aut` accept `word`?
pub fn accepts(aut: &Tela, word: &LassoWord) -> Result<bool> {
    let folded = FoldedGraph::build(aut, word)?;
    has_accepting_cycle(&folded.graph, aut.acceptance())
}

/// Is `L(aut)` empty?
pub fn is_empty(aut: &Tela) -> Result<bool> {
    Ok(!has_accepting_cycle(&automaton_graph(aut), aut.acceptance())?)
}

/// Outcome of comparing an automaton with a claimed complement.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct XorReport {
    pub checked: usize,
    /// Lassos accepted by both or by neither, sorted.
    pub violations: Vec<LassoWord>,
}

impl XorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that exactly one of `a`, `c` accepts each enumerated lasso.
pub fn xor_suite(a: &Tela, c: &Tela, max_u: usize, max_v: usize) -> Result<XorReport> {
    if a.num_symbols() != c.num_symbols() {
        return Err(Error::AlphabetMismatch);
    }
    let words = LassoWord::enumerate(a.num_symbols(), max_u, max_v);
    let verdicts: Vec<Result<Option<LassoWord>>> = words
        .par_iter()
        .map(|w| Ok((accepts(a, w)? == accepts(c, w)?).then(|| w.clone())))
        .collect();
    let mut violations = Vec::new();
    for v in verdicts {
        if let Some(w) = v? {
            violations.push(w);
        }
    }
    violations.sort();
    Ok(XorReport { checked: words.len(), violations })
}

/// Lassos on which `a` and `b` disagree.
pub fn disagreements(a: &Tela, b: &Tela, max_u: usize, max_v: usize) -> Result<Vec<LassoWord>> {
    if a.num_symbols() != b.num_symbols() {
        return Err(Error::AlphabetMismatch);
    }
    let words = LassoWord::enumerate(a.num_symbols(), max_u, max_v);
    let verdicts: Vec<Result<Option<LassoWord>>> = words
        .par_iter()
        .map(|w| Ok((accepts(a, w)? != accepts(b, w)?).then(|| w.clone())))
        .collect();
    let mut out: Vec<LassoWord> = verdicts.into_iter().filter_map(|r| r.transpose()).collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tela::Transition;
    use AcceptanceFormula as F;

    fn t1(alpha: F, k: u32) -> Tela {
        Tela::new(vec![], 1, [0], k, alpha, [Transition::new(0, 0, 0, [0])]).unwrap()
    }

    fn a_omega() -> LassoWord {
        LassoWord::new(vec![], vec![0]).unwrap()
    }

    #[test]
    fn t1_membership() {
        assert!(accepts(&t1(F::Inf(0), 1), &a_omega()).unwrap());
        assert!(!accepts(&t1(F::Fin(0), 1), &a_omega()).unwrap());
    }

    #[test]
    fn t1_emptiness() {
        assert!(!is_empty(&t1(F::Inf(0), 1)).unwrap());
        assert!(is_empty(&t1(F::Inf(1), 2)).unwrap());
    }

    #[test]
    fn xor_examples() {
        let a = t1(F::Inf(0), 1);
        let r = xor_suite(&a, &a, 2, 3).unwrap();
        assert_eq!(r.violations.len(), r.checked);
        let empty = t1(F::False, 1);
        let universal = t1(F::True, 1);
        assert!(xor_suite(&empty, &universal, 2, 3).unwrap().passed());
    }

    #[test]
    fn enumeration_counts() {
        // (1 + 2 + 4) prefixes times (2 + 4 + 8) periods
        assert_eq!(LassoWord::enumerate(2, 2, 3).len(), 98);
        assert!(LassoWord::new(vec![0], vec![]).is_err());
    }

    #[test]
    fn folded_graph_wraps_to_period_start() {
        let a = t1(F::Inf(0), 1);
        let w = LassoWord::new(vec![0, 0], vec![0, 0]).unwrap();
        let g = FoldedGraph::build(&a, &w).unwrap();
        assert_eq!(g.nodes, vec![(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(g.graph.edge_count(), 4);
        let last = g.index[&(0, 3)];
        let back: Vec<_> = g.graph.neighbors(last).collect();
        assert_eq!(back, vec![g.index[&(0, 2)]]);
    }

    #[test]
    fn rejects_foreign_symbols() {
        let w = LassoWord::new(vec![], vec![1]).unwrap();
        assert!(matches!(accepts(&t1(F::Inf(0), 1), &w), Err(Error::InvalidWord(_))));
    }
}
