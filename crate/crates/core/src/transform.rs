//! Structural transformations on automata.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexMap;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;

use crate::acceptance::{AcceptanceFormula, GenRabinPair};
use crate::error::{Error, Result};
use crate::sets::{Colour, ColourSet, StateId, MAX_COLOURS};
use crate::tela::{Symbol, Tela, Transition};

/// A subset of an automaton's transitions.
pub type TransitionSubset = Vec<Transition>;

/// The transitions of `aut` that do not carry colour `c`.
pub fn restrict_delta(aut: &Tela, c: Colour) -> Result<TransitionSubset> {
    if c >= aut.num_colours() {
        return Err(Error::ColourOutOfRange { colour: c, count: aut.num_colours() });
    }
    Ok(aut.transitions().filter(|t| !t.colours.contains(c)).collect())
}

/// Whether [`product`] builds every state pair or only the reachable ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    Full,
    Reachable,
}

/// Synchronised product; colours of `b` are shifted above those of `a` and
/// the condition is the conjunction of both conditions.
pub fn product(a: &Tela, b: &Tela, mode: ProductMode) -> Result<Tela> {
    product_within(a, b, mode, usize::MAX)
}

/// [`product`] failing with [`Error::BudgetExceeded`] once more than
/// `budget` states would be built.
pub fn product_within(a: &Tela, b: &Tela, mode: ProductMode, budget: usize) -> Result<Tela> {
    if a.aps() != b.aps() {
        return Err(Error::AlphabetMismatch);
    }
    let shift = a.num_colours();
    let k = shift + b.num_colours();
    if k > MAX_COLOURS {
        return Err(Error::TooManyColours(k));
    }
    let alpha = AcceptanceFormula::and([
        a.acceptance().clone(),
        b.acceptance().map_colours(&|c| c + shift),
    ]);
    let nb = b.num_states();
    let pairs_initial = a
        .initial()
        .iter()
        .flat_map(|&p| b.initial().iter().map(move |&q| (p, q)));
    let mut transitions = Vec::new();
    let step = |p: StateId, q: StateId, sym: Symbol, out: &mut Vec<((StateId, StateId), ColourSet)>| {
        for &(p2, c1) in a.succ(p, sym) {
            for &(q2, c2) in b.succ(q, sym) {
                out.push(((p2, q2), c1.union(c2.shifted(shift))));
            }
        }
    };
    let mut buf = Vec::new();
    match mode {
        ProductMode::Full => {
            if a.num_states().saturating_mul(nb) > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let initial: Vec<StateId> = pairs_initial.map(|(p, q)| p * nb as StateId + q).collect();
            for p in 0..a.num_states() as StateId {
                for q in 0..nb as StateId {
                    for sym in 0..a.num_symbols() as Symbol {
                        buf.clear();
                        step(p, q, sym, &mut buf);
                        for &((p2, q2), colours) in &buf {
                            transitions.push(Transition {
                                src: p * nb as StateId + q,
                                symbol: sym,
                                dst: p2 * nb as StateId + q2,
                                colours,
                            });
                        }
                    }
                }
            }
            Tela::new(a.aps().to_vec(), a.num_states() * nb, initial, k, alpha, transitions)
        }
        ProductMode::Reachable => {
            let mut ids: IndexMap<(StateId, StateId), ()> = IndexMap::new();
            let mut queue = VecDeque::new();
            for pq in pairs_initial {
                if ids.insert(pq, ()).is_none() {
                    queue.push_back(pq);
                }
            }
            let initial: Vec<StateId> = (0..ids.len() as StateId).collect();
            while let Some((p, q)) = queue.pop_front() {
                let src = ids.get_index_of(&(p, q)).unwrap() as StateId;
                for sym in 0..a.num_symbols() as Symbol {
                    buf.clear();
                    step(p, q, sym, &mut buf);
                    for &(pq2, colours) in &buf {
                        let (dst, fresh) = ids.insert_full(pq2, ());
                        if fresh.is_none() {
                            if ids.len() > budget {
                                return Err(Error::BudgetExceeded(budget));
                            }
                            queue.push_back(pq2);
                        }
                        transitions.push(Transition { src, symbol: sym, dst: dst as StateId, colours });
                    }
                }
            }
            let n = ids.len().max(1);
            Tela::new(a.aps().to_vec(), n, initial, k, alpha, transitions)
        }
    }
}

/// Product of several generalized Büchi automata.
pub fn gba_product(parts: &[Tela], mode: ProductMode) -> Result<Tela> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Usage("product of an empty list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, next| product(&acc, next, mode))
}

/// The Inf colours of a conjunction of Inf atoms, in formula order.
fn gba_colours(alpha: &AcceptanceFormula) -> Result<Vec<Colour>> {
    match alpha {
        AcceptanceFormula::True => Ok(vec![]),
        AcceptanceFormula::Inf(c) => Ok(vec![*c]),
        AcceptanceFormula::And(ch) => ch
            .iter()
            .map(|x| match x {
                AcceptanceFormula::Inf(c) => Ok(*c),
                _ => Err(Error::ShapeMismatch(format!("not generalized Büchi: {alpha}"))),
            })
            .collect(),
        _ => Err(Error::ShapeMismatch(format!("not generalized Büchi: {alpha}"))),
    }
}

/// Round-robin degeneralisation into a transition-based Büchi automaton
/// with condition `Inf(0)`.
pub fn degeneralize(g: &Tela) -> Result<Tela> {
    let cols = gba_colours(g.acceptance())?;
    let k = cols.len();
    let buchi = AcceptanceFormula::Inf(0);
    if k <= 1 {
        let c0 = cols.first().copied();
        return g.recoloured(1, buchi, |c| match c0 {
            None => ColourSet::singleton(0),
            Some(c0) if c.contains(c0) => ColourSet::singleton(0),
            Some(_) => ColourSet::EMPTY,
        });
    }
    let mut ids: IndexMap<(StateId, usize), ()> = IndexMap::new();
    let mut queue = VecDeque::new();
    for &q in g.initial() {
        if ids.insert((q, 0), ()).is_none() {
            queue.push_back((q, 0));
        }
    }
    let initial: Vec<StateId> = (0..ids.len() as StateId).collect();
    let mut transitions = Vec::new();
    while let Some((q, j)) = queue.pop_front() {
        let src = ids.get_index_of(&(q, j)).unwrap() as StateId;
        for sym in 0..g.num_symbols() as Symbol {
            for &(d, colours) in g.succ(q, sym) {
                let mut j2 = j;
                while j2 < k && colours.contains(cols[j2]) {
                    j2 += 1;
                }
                let accepting = j2 == k;
                if accepting {
                    j2 = 0;
                }
                let (dst, fresh) = ids.insert_full((d, j2), ());
                if fresh.is_none() {
                    queue.push_back((d, j2));
                }
                transitions.push(Transition {
                    src,
                    symbol: sym,
                    dst: dst as StateId,
                    colours: if accepting { ColourSet::singleton(0) } else { ColourSet::EMPTY },
                });
            }
        }
    }
    Tela::new(g.aps().to_vec(), ids.len().max(1), initial, 1, buchi, transitions)
}

/// Removes Fin conditions by copying: copy 0 runs the full automaton without
/// colours and may jump into copy `j` on any transition; copy `j` keeps only
/// the transitions avoiding pair `j`'s Fin colour and re-colours its Inf sets
/// onto shared colours `0..ℓ`. The result has exactly `n(k+1)` states.
pub fn fin_removal(aut: &Tela, pairs: &[GenRabinPair]) -> Result<Tela> {
    let n = aut.num_states() as StateId;
    let ell = pairs.iter().map(|p| p.inf.len()).max().unwrap_or(0).max(1) as u32;
    let alpha = AcceptanceFormula::generalized_buchi(ell);
    let mut transitions = Vec::new();
    for t in aut.transitions() {
        transitions.push(Transition { colours: ColourSet::EMPTY, ..t });
        for j in 1..=pairs.len() as StateId {
            transitions.push(Transition { src: t.src, symbol: t.symbol, dst: j * n + t.dst, colours: ColourSet::EMPTY });
        }
    }
    for (j, pair) in pairs.iter().enumerate() {
        let base = (j as StateId + 1) * n;
        let padding = ColourSet::full(ell).difference(ColourSet::full(pair.inf.len() as u32));
        for t in aut.transitions() {
            if pair.fin_colour.is_some_and(|f| t.colours.contains(f)) {
                continue;
            }
            let mut colours = padding;
            for (l, g) in pair.inf.iter().enumerate() {
                if t.colours.intersects(*g) {
                    colours.insert(l as Colour);
                }
            }
            transitions.push(Transition { src: base + t.src, symbol: t.symbol, dst: base + t.dst, colours });
        }
    }
    Tela::new(
        aut.aps().to_vec(),
        aut.num_states() * (pairs.len() + 1),
        aut.initial().iter().copied(),
        ell,
        alpha,
        transitions,
    )
}

/// Language-preserving clean-up of an Inf-only automaton: keeps the states
/// that are reachable and can reach an accepting cycle, then merges
/// bisimilar states (same colours to the same classes on every letter).
pub fn reduce_inf(aut: &Tela) -> Result<Tela> {
    let alpha = aut.acceptance();
    if alpha.has_fin() {
        return Err(Error::ShapeMismatch(format!("expected an Inf-only condition, got {alpha}")));
    }
    let useful = useful_states(aut);
    if !aut.initial().iter().any(|&q| useful[q as usize]) {
        return Tela::new(aut.aps().to_vec(), 1, [], aut.num_colours(), alpha.clone(), []);
    }
    let n = aut.num_states();
    let mut forced_split = vec![false; n];
    loop {
        let block = bisimulation(aut, &useful, &forced_split);
        let mut rep: HashMap<StateId, usize> = HashMap::new();
        let mut out_edges: HashMap<StateId, Vec<(Symbol, StateId, ColourSet)>> = HashMap::new();
        let mut conflict = false;
        for q in (0..n).filter(|&q| useful[q]) {
            let b = block[q];
            if out_edges.contains_key(&b) {
                continue;
            }
            let mut seen: HashMap<(Symbol, StateId), ColourSet> = HashMap::new();
            let mut list = Vec::new();
            for a in 0..aut.num_symbols() as Symbol {
                for &(q2, c) in aut.succ(q as StateId, a).iter().filter(|(q2, _)| useful[*q2 as usize]) {
                    let b2 = block[q2 as usize];
                    match seen.insert((a, b2), c) {
                        Some(c0) if c0 != c => {
                            conflict = true;
                            (0..n).filter(|&r| block[r] == b2).for_each(|r| forced_split[r] = true);
                        }
                        Some(_) => {}
                        None => list.push((a, b2, c)),
                    }
                }
            }
            out_edges.insert(b, list);
            rep.insert(b, q);
        }
        if conflict {
            continue;
        }
        // Renumber classes in order of first appearance from the initial states.
        let mut order: IndexMap<StateId, ()> = IndexMap::new();
        let mut queue = VecDeque::new();
        for &q in aut.initial() {
            if useful[q as usize] && order.insert(block[q as usize], ()).is_none() {
                queue.push_back(block[q as usize]);
            }
        }
        let initial: Vec<StateId> = (0..order.len() as StateId).collect();
        let mut transitions = Vec::new();
        while let Some(b) = queue.pop_front() {
            let src = order.get_index_of(&b).unwrap() as StateId;
            for &(a, b2, colours) in &out_edges[&b] {
                let (dst, fresh) = order.insert_full(b2, ());
                if fresh.is_none() {
                    queue.push_back(b2);
                }
                transitions.push(Transition { src, symbol: a, dst: dst as StateId, colours });
            }
        }
        let mut out = Tela::new(aut.aps().to_vec(), order.len(), initial, aut.num_colours(), alpha.clone(), transitions)?;
        if let Some(names) = aut.state_names() {
            let names = order.keys().map(|b| names[rep[b]].clone()).collect();
            out = out.with_state_names(names)?;
        }
        if let Some(name) = aut.name() {
            out = out.with_name(name);
        }
        return Ok(out);
    }
}

/// States reachable from the initial states that can reach a cycle whose
/// colours satisfy the (monotone) condition.
fn useful_states(aut: &Tela) -> Vec<bool> {
    let n = aut.num_states();
    let mut g: DiGraph<(), ColourSet> = DiGraph::with_capacity(n, aut.num_transitions());
    for _ in 0..n {
        g.add_node(());
    }
    for t in aut.transitions() {
        g.add_edge(NodeIndex::new(t.src as usize), NodeIndex::new(t.dst as usize), t.colours);
    }
    let mut reach = vec![false; n];
    let mut stack: Vec<usize> = aut.initial().iter().map(|&q| q as usize).collect();
    while let Some(q) = stack.pop() {
        if !std::mem::replace(&mut reach[q], true) {
            stack.extend(g.neighbors(NodeIndex::new(q)).map(|x| x.index()));
        }
    }
    let comps = tarjan_scc(&g);
    let mut comp_of = vec![0; n];
    for (i, comp) in comps.iter().enumerate() {
        for v in comp {
            comp_of[v.index()] = i;
        }
    }
    let mut union = vec![None::<ColourSet>; comps.len()];
    for e in g.edge_references() {
        let (s, d) = (e.source().index(), e.target().index());
        if comp_of[s] == comp_of[d] && reach[s] {
            let slot = &mut union[comp_of[s]];
            *slot = Some(slot.unwrap_or_default().union(*e.weight()));
        }
    }
    let mut useful = vec![false; n];
    let mut stack: Vec<usize> = (0..n)
        .filter(|&q| union[comp_of[q]].is_some_and(|m| aut.acceptance().satisfied_by(m)))
        .collect();
    while let Some(q) = stack.pop() {
        if !std::mem::replace(&mut useful[q], true) {
            stack.extend(g.neighbors_directed(NodeIndex::new(q), Direction::Incoming).map(|x| x.index()));
        }
    }
    (0..n).map(|q| useful[q] && reach[q]).collect()
}

/// Coarsest partition of the useful states stable under coloured successors;
/// `split` states are kept in singleton classes.
fn bisimulation(aut: &Tela, useful: &[bool], split: &[bool]) -> Vec<StateId> {
    let n = aut.num_states();
    let mut block: Vec<StateId> = (0..n).map(|q| if split[q] { q as StateId + 1 } else { 0 }).collect();
    let mut count = usize::MAX;
    loop {
        let mut ids: IndexMap<(StateId, Vec<(Symbol, ColourSet, StateId)>), ()> = IndexMap::new();
        let next: Vec<StateId> = (0..n)
            .map(|q| {
                let mut sig: Vec<_> = (0..aut.num_symbols() as Symbol)
                    .flat_map(|a| {
                        let block = &block;
                        aut.succ(q as StateId, a)
                            .iter()
                            .filter(|(q2, _)| useful[*q2 as usize])
                            .map(move |&(q2, c)| (a, c, block[q2 as usize]))
                    })
                    .collect();
                sig.sort_unstable();
                sig.dedup();
                ids.insert_full((block[q], sig), ()).0 as StateId
            })
            .collect();
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}
