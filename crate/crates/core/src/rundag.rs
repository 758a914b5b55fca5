//! Run DAGs over lasso words, folded onto the positions of the lasso, and
//! the rank/model labelling procedure for Inf-only conditions.
//!
//! The labelling repeatedly removes the nodes reachable from the
//! `M`-endangered nodes of the first minimal model `M` (in lex order) that
//! has any, giving them an odd rank, then removes the nodes that have become
//! finite with the next even rank. It gets stuck exactly when some run
//! satisfies the condition.

use std::collections::VecDeque;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::NodeIndex;
use petgraph::visit::{EdgeFiltered, EdgeRef};
use petgraph::Direction;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{FoldedGraph, LassoWord};
use crate::ranking::Rank;
use crate::sets::{ColourSet, StateId};
use crate::tela::Tela;

/// A folded run DAG with per-node finiteness.
#[derive(Clone, Debug)]
pub struct FoldedRunDag {
    pub folded: FoldedGraph,
    /// A node is finite iff it cannot reach a cycle.
    pub finite: Vec<bool>,
    pub prefix_len: usize,
    pub period_len: usize,
}

impl FoldedRunDag {
    pub fn node_count(&self) -> usize {
        self.folded.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.folded.graph.edge_count()
    }

    pub fn node(&self, state: StateId, pos: usize) -> Option<NodeIndex> {
        self.folded.index.get(&(state, pos)).copied()
    }

    pub fn is_periodic(&self, pos: usize) -> bool {
        pos >= self.prefix_len
    }
}

pub fn build_rundag(aut: &Tela, word: &LassoWord) -> Result<FoldedRunDag> {
    let folded = FoldedGraph::build(aut, word)?;
    let alive = vec![true; folded.nodes.len()];
    let finite = finite_within(&folded, &alive);
    Ok(FoldedRunDag { folded, finite, prefix_len: word.prefix.len(), period_len: word.period.len() })
}

/// Alive nodes that cannot reach a cycle of the alive subgraph.
fn finite_within(g: &FoldedGraph, alive: &[bool]) -> Vec<bool> {
    let graph = &g.graph;
    let live_edge = |s: NodeIndex, t: NodeIndex| alive[s.index()] && alive[t.index()];
    let filtered = EdgeFiltered::from_fn(graph, |e| live_edge(e.source(), e.target()));
    let mut on_cycle = vec![false; alive.len()];
    for comp in tarjan_scc(&filtered) {
        let n = comp[0];
        if !alive[n.index()] {
            continue;
        }
        let cyclic = comp.len() > 1 || graph.edges(n).any(|e| e.target() == n);
        if cyclic {
            for v in comp {
                on_cycle[v.index()] = true;
            }
        }
    }
    let infinite = backward_closure(g, alive, on_cycle);
    alive.iter().zip(infinite).map(|(&a, inf)| a && !inf).collect()
}

/// Alive nodes that can reach a marked node through alive nodes.
fn backward_closure(g: &FoldedGraph, alive: &[bool], mut marked: Vec<bool>) -> Vec<bool> {
    let mut queue: VecDeque<NodeIndex> =
        (0..marked.len()).filter(|&i| marked[i]).map(NodeIndex::new).collect();
    while let Some(v) = queue.pop_front() {
        for u in g.graph.neighbors_directed(v, Direction::Incoming) {
            if alive[u.index()] && !marked[u.index()] {
                marked[u.index()] = true;
                queue.push_back(u);
            }
        }
    }
    marked
}

/// Alive nodes that can reach (through alive nodes) an alive edge carrying `c`.
fn reaches_colour(g: &FoldedGraph, alive: &[bool], c: u32) -> Vec<bool> {
    let mut marked = vec![false; alive.len()];
    for e in g.graph.edge_references() {
        if e.weight().contains(c) && alive[e.source().index()] && alive[e.target().index()] {
            marked[e.source().index()] = true;
        }
    }
    backward_closure(g, alive, marked)
}

/// Can `node` reach no `c`-edge, for every `c` in `m`?
pub fn endangered(d: &FoldedRunDag, node: NodeIndex, m: ColourSet) -> bool {
    let alive = vec![true; d.node_count()];
    m.iter().all(|c| !reaches_colour(&d.folded, &alive, c)[node.index()])
}

/// Ranks and models per folded node (indexed like the graph's nodes).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labelling {
    pub ranks: Vec<Rank>,
    pub models: Vec<ColourSet>,
}

impl Labelling {
    pub fn max_rank(&self) -> Rank {
        self.ranks.iter().copied().max().unwrap_or(0)
    }
}

/// Runs the labelling procedure; `None` means it got stuck (⊥), i.e. some
/// run on the word is accepting.
pub fn label(aut: &Tela, word: &LassoWord) -> Result<Option<Labelling>> {
    let d = build_rundag(aut, word)?;
    label_dag(aut, &d)
}

pub fn label_dag(aut: &Tela, d: &FoldedRunDag) -> Result<Option<Labelling>> {
    let alpha = aut.acceptance();
    if alpha.has_fin() {
        return Err(Error::ShapeMismatch("run DAG labelling needs an Inf-only condition".into()));
    }
    let models = alpha.minimal_models(aut.num_colours());
    let lex = models.iter().next().ok_or(Error::NoModels)?;
    let n = d.node_count();
    let mut alive = vec![true; n];
    let mut ranks = vec![0 as Rank; n];
    let mut assigned = vec![lex; n];

    let remove_finite = |alive: &mut Vec<bool>, ranks: &mut Vec<Rank>, assigned: &mut Vec<ColourSet>, r: Rank| {
        let fin = finite_within(&d.folded, alive);
        for v in 0..n {
            if fin[v] {
                alive[v] = false;
                ranks[v] = r;
                assigned[v] = lex;
            }
        }
    };
    remove_finite(&mut alive, &mut ranks, &mut assigned, 0);
    let mut i: Rank = 0;
    while alive.iter().any(|&a| a) {
        let mut chosen = None;
        for m in models.iter() {
            let mut endangered_set = alive.clone();
            for c in m.iter() {
                let hits = reaches_colour(&d.folded, &alive, c);
                for v in 0..n {
                    endangered_set[v] &= !hits[v];
                }
            }
            if endangered_set.iter().any(|&x| x) {
                chosen = Some((m, endangered_set));
                break;
            }
        }
        let Some((m, start)) = chosen else {
            return Ok(None);
        };
        // everything reachable from an endangered node is endangered too
        let mut reach = start;
        let mut queue: VecDeque<NodeIndex> = (0..n).filter(|&v| reach[v]).map(NodeIndex::new).collect();
        while let Some(v) = queue.pop_front() {
            for u in d.folded.graph.neighbors(v) {
                if alive[u.index()] && !reach[u.index()] {
                    reach[u.index()] = true;
                    queue.push_back(u);
                }
            }
        }
        for v in 0..n {
            if reach[v] {
                alive[v] = false;
                ranks[v] = i + 1;
                assigned[v] = m;
            }
        }
        remove_finite(&mut alive, &mut ranks, &mut assigned, i + 2);
        i += 2;
    }
    Ok(Some(Labelling { ranks, models: assigned }))
}

/// Properties a labelling must have; returns the violated ones.
pub fn check_labelling(aut: &Tela, d: &FoldedRunDag, lab: &Labelling) -> Vec<String> {
    let mut bad = Vec::new();
    let n = aut.num_states();
    let max = lab.max_rank();
    if max as usize > 2 * n {
        bad.push(format!("max rank {max} exceeds 2n = {}", 2 * n));
    }
    for e in d.folded.graph.edge_references() {
        let (s, t) = (e.source().index(), e.target().index());
        if lab.ranks[t] > lab.ranks[s] {
            bad.push(format!("rank increases along edge {s} -> {t}"));
        }
    }
    let models = aut.acceptance().minimal_models(aut.num_colours());
    let lex = models.iter().next();
    for v in 0..d.node_count() {
        let ok = if lab.ranks[v] % 2 == 1 {
            models.contains(lab.models[v])
        } else {
            Some(lab.models[v]) == lex
        };
        if !ok {
            bad.push(format!("node {v} has inconsistent model {}", lab.models[v]));
        }
    }
    if max > 0 {
        let top_odd = lab.ranks.iter().copied().filter(|r| r % 2 == 1).max().unwrap_or(0);
        let periodic: Vec<usize> = (d.prefix_len..d.prefix_len + d.period_len).collect();
        let mut some_odd_max = false;
        for &p in &periodic {
            let at: Vec<Rank> = d
                .folded
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, &(_, pos))| pos == p)
                .map(|(v, _)| lab.ranks[v])
                .collect();
            for odd in (1..=top_odd).step_by(2) {
                if !at.contains(&odd) {
                    bad.push(format!("odd rank {odd} missing at periodic position {p}"));
                }
            }
            if at.iter().copied().max().is_some_and(|m| m % 2 == 1) {
                some_odd_max = true;
            }
        }
        if top_odd == 0 {
            bad.push("positive rank without odd ranks".into());
        } else if !some_odd_max {
            bad.push("no periodic position has an odd maximum".into());
        }
    }
    bad
}

/// DOT rendering with nodes named `q<state>_<pos>`.
pub fn export_dot(aut: &Tela, d: &FoldedRunDag, lab: Option<&Labelling>) -> String {
    let mut out = String::from("digraph rundag {\n  rankdir=LR;\n  node [shape=box];\n");
    let mut order: Vec<usize> = (0..d.node_count()).collect();
    order.sort_by_key(|&v| (d.folded.nodes[v].1, d.folded.nodes[v].0));
    let name = |v: usize| {
        let (q, p) = d.folded.nodes[v];
        format!("q{q}_{p}")
    };
    for &v in &order {
        let (q, p) = d.folded.nodes[v];
        let state = aut.state_name(q).filter(|s| !s.is_empty()).map_or_else(|| q.to_string(), str::to_string);
        let mut text = format!("{state},{p}");
        if let Some(l) = lab {
            let _ = write!(text, " | r={} m={}", l.ranks[v], l.models[v]);
        }
        let _ = writeln!(out, "  {} [label=\"{}\"];", name(v), text.replace('"', "\\\""));
    }
    let mut edges: Vec<(usize, usize, ColourSet)> = d
        .folded
        .graph
        .edge_references()
        .map(|e| (e.source().index(), e.target().index(), *e.weight()))
        .collect();
    edges.sort_by_key(|&(s, t, _)| (d.folded.nodes[s].1, d.folded.nodes[s].0, d.folded.nodes[t].0));
    for (s, t, c) in edges {
        if c.is_empty() {
            let _ = writeln!(out, "  {} -> {};", name(s), name(t));
        } else {
            let _ = writeln!(out, "  {} -> {} [label=\"{c}\"];", name(s), name(t));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceFormula as F;
    use crate::tela::Transition;

    fn t1(alpha: F, k: u32) -> Tela {
        Tela::new(vec![], 1, [0], k, alpha, [Transition::new(0, 0, 0, [0])]).unwrap()
    }

    fn a_omega() -> LassoWord {
        LassoWord::new(vec![], vec![0]).unwrap()
    }

    #[test]
    fn t1_dag_is_one_infinite_node() {
        let d = build_rundag(&t1(F::Inf(0), 1), &a_omega()).unwrap();
        assert_eq!(d.node_count(), 1);
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.finite, vec![false]);
        let n = d.node(0, 0).unwrap();
        assert!(!endangered(&d, n, ColourSet::singleton(0)));
        assert!(endangered(&d, n, ColourSet::singleton(1)));
    }

    #[test]
    fn dying_runs_are_finite() {
        let a = Tela::new(vec![], 2, [0], 1, F::Inf(0), [Transition::new(0, 0, 1, [])]).unwrap();
        let d = build_rundag(&a, &a_omega()).unwrap();
        assert!(d.finite.iter().all(|&f| f));
        let lab = label(&a, &a_omega()).unwrap().unwrap();
        assert!(lab.ranks.iter().all(|&r| r == 0));
        assert!(lab.models.iter().all(|&m| m == ColourSet::singleton(0)));
    }

    #[test]
    fn t1_labelling() {
        assert_eq!(label(&t1(F::Inf(0), 1), &a_omega()).unwrap(), None);
        let a = t1(F::Inf(1), 2);
        let d = build_rundag(&a, &a_omega()).unwrap();
        let lab = label_dag(&a, &d).unwrap().unwrap();
        assert_eq!(lab.ranks, vec![1]);
        assert_eq!(lab.models, vec![ColourSet::singleton(1)]);
        assert!(check_labelling(&a, &d, &lab).is_empty());
    }

    #[test]
    fn dot_export() {
        let a = t1(F::Inf(1), 2);
        let d = build_rundag(&a, &a_omega()).unwrap();
        let plain = export_dot(&a, &d, None);
        assert!(plain.contains("q0_0 [label=\"0,0\"]"));
        assert!(!plain.contains(" | r="));
        let lab = label_dag(&a, &d).unwrap().unwrap();
        let text = export_dot(&a, &d, Some(&lab));
        assert!(text.contains("q0_0 [label=\"0,0 | r=1 m={1}\"]"));
        assert!(text.contains("q0_0 -> q0_0 [label=\"{0}\"]"));
    }
}
