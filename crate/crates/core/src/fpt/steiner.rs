//! Dreyfus–Wagner Steiner trees with lazily filled terminal-subset layers.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Cost, EdgeId, EdgeSet, NodeId, WeightedGraph};

/// Largest terminal list accepted by the subset tables.
pub const MAX_TERMINALS: usize = 22;

#[derive(Debug, Clone, Copy)]
enum Link {
    Unset,
    Leaf,
    Split(u32),
    Edge(EdgeId),
}

#[derive(Debug, Clone)]
struct Layer {
    cost: Vec<Option<Cost>>,
    link: Vec<Link>,
}

/// `value(S, v)` is the cheapest tree containing the terminals of `S` and
/// the node `v`. In restricted mode every node of that tree except `v`
/// avoids the terminals outside `S`.
#[derive(Debug)]
pub struct SteinerTable<'g> {
    g: &'g WeightedGraph,
    terminals: Vec<NodeId>,
    term_index: Vec<Option<usize>>,
    blocked: Vec<bool>,
    restrict: bool,
    layers: HashMap<u32, Layer>,
}

impl<'g> SteinerTable<'g> {
    pub fn new(
        g: &'g WeightedGraph,
        terminals: &[NodeId],
        blocked: Vec<bool>,
        restrict: bool,
    ) -> Result<Self> {
        let n = g.node_count();
        if terminals.len() > MAX_TERMINALS {
            return Err(Error::cap("terminals", MAX_TERMINALS, terminals.len()));
        }
        if blocked.len() != n {
            return Err(Error::input("blocked mask has the wrong length"));
        }
        let mut term_index = vec![None; n];
        for (i, &t) in terminals.iter().enumerate() {
            if t >= n {
                return Err(Error::input(format!("terminal {t} out of range")));
            }
            if term_index[t].replace(i).is_some() {
                return Err(Error::input(format!("terminal {t} listed twice")));
            }
            if blocked[t] {
                return Err(Error::input(format!("terminal {t} is forbidden")));
            }
        }
        Ok(Self {
            g,
            terminals: terminals.to_vec(),
            term_index,
            blocked,
            restrict,
            layers: HashMap::new(),
        })
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.terminals.len()) - 1) as u32
    }

    fn passable(&self, v: NodeId, mask: u32) -> bool {
        if self.blocked[v] {
            return false;
        }
        match self.term_index[v] {
            Some(i) if self.restrict => mask >> i & 1 == 1,
            _ => true,
        }
    }

    fn ensure(&mut self, mask: u32) {
        if self.layers.contains_key(&mask) {
            return;
        }
        let mut pending = Vec::new();
        let mut sub = (mask - 1) & mask;
        while sub != 0 {
            if !self.layers.contains_key(&sub) {
                pending.push(sub);
            }
            sub = (sub - 1) & mask;
        }
        pending.sort_unstable();
        for s in pending {
            self.compute(s);
        }
        self.compute(mask);
    }

    fn compute(&mut self, mask: u32) {
        let n = self.g.node_count();
        let mut cost: Vec<Option<Cost>> = vec![None; n];
        let mut link = vec![Link::Unset; n];
        if mask.count_ones() == 1 {
            let t = self.terminals[mask.trailing_zeros() as usize];
            cost[t] = Some(0);
            link[t] = Link::Leaf;
        } else {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            // splits S1 ∋ lowest terminal, S2 = mask \ S1, both non-empty
            let mut subs = Vec::new();
            let mut r = (rest - 1) & rest;
            loop {
                subs.push(low | r);
                if r == 0 {
                    break;
                }
                r = (r - 1) & rest;
            }
            subs.sort_unstable();
            for v in 0..n {
                if self.blocked[v] {
                    continue;
                }
                for &s1 in &subs {
                    let (Some(a), Some(b)) = (self.layers[&s1].cost[v], self.layers[&(mask ^ s1)].cost[v]) else {
                        continue;
                    };
                    if cost[v].is_none_or(|c| a + b < c) {
                        cost[v] = Some(a + b);
                        link[v] = Link::Split(s1);
                    }
                }
            }
        }
        // relax along edges; only passable nodes may be passed through
        let mut heap: BinaryHeap<Reverse<(Cost, NodeId)>> = cost
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| Reverse((c, v))))
            .collect();
        let mut done = vec![false; n];
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] || cost[u] != Some(d) {
                continue;
            }
            done[u] = true;
            if !self.passable(u, mask) {
                continue;
            }
            for &e in self.g.incident(u) {
                let edge = self.g.edge(e);
                let w = edge.other(u);
                if self.blocked[w] || done[w] {
                    continue;
                }
                let nd = d + edge.cost;
                if cost[w].is_none_or(|c| nd < c) {
                    cost[w] = Some(nd);
                    link[w] = Link::Edge(e);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        self.layers.insert(mask, Layer { cost, link });
    }

    pub fn value(&mut self, mask: u32, v: NodeId) -> Option<Cost> {
        if mask == 0 {
            return Some(0);
        }
        self.ensure(mask);
        self.layers[&mask].cost[v]
    }

    /// Steiner tree cost of the terminals in `mask`.
    pub fn smt(&mut self, mask: u32) -> Option<Cost> {
        if mask == 0 {
            return Some(0);
        }
        let t = self.terminals[mask.trailing_zeros() as usize];
        self.value(mask, t)
    }

    /// Edges realizing `value(mask, v)`; empty when that value is infinite.
    pub fn tree_at(&mut self, mask: u32, v: NodeId) -> EdgeSet {
        if mask == 0 || self.value(mask, v).is_none() {
            return EdgeSet::empty();
        }
        let mut out = Vec::new();
        let mut stack = vec![(mask, v)];
        while let Some((m, x)) = stack.pop() {
            match self.layers[&m].link[x] {
                Link::Unset | Link::Leaf => {}
                Link::Split(s1) => {
                    stack.push((s1, x));
                    stack.push((m ^ s1, x));
                }
                Link::Edge(e) => {
                    out.push(e);
                    stack.push((m, self.g.edge(e).other(x)));
                }
            }
        }
        EdgeSet::new(out)
    }

    pub fn tree(&mut self, mask: u32) -> EdgeSet {
        if mask == 0 {
            return EdgeSet::empty();
        }
        let t = self.terminals[mask.trailing_zeros() as usize];
        self.tree_at(mask, t)
    }
}

/// Minimum-cost tree spanning `terminals` in `g` with `forbidden` deleted.
/// `Ok(None)` when the terminals cannot be connected.
pub fn steiner_tree_exact(
    g: &WeightedGraph,
    terminals: &[NodeId],
    forbidden: &[NodeId],
) -> Result<Option<EdgeSet>> {
    let n = g.node_count();
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if terms.is_empty() {
        return Err(Error::input("steiner tree needs at least one terminal"));
    }
    let mut blocked = vec![false; n];
    for &f in forbidden {
        if f >= n {
            return Err(Error::input(format!("forbidden node {f} out of range")));
        }
        blocked[f] = true;
    }
    if let Some(t) = terms.iter().find(|&&t| t < n && blocked[t]) {
        return Err(Error::input(format!("terminal {t} is also forbidden")));
    }
    let mut table = SteinerTable::new(g, &terms, blocked, false)?;
    let full = table.full_mask();
    if table.smt(full).is_none() {
        return Ok(None);
    }
    Ok(Some(table.tree(full)))
}
