//! Restricted-cover oracles, the brute-force optimum and reverse-delete
//! pruning.

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec};
use crate::graph::{mst_on_mask, Cost, EdgeId, EdgeSet, NodeId, WeightedGraph};
use crate::residual::{components_feasible, crosses_all, is_cover, ResidualState};

/// Size limits for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_subset_nodes: usize,
    pub max_bruteforce_edges: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_subset_nodes: 20,
            max_bruteforce_edges: 24,
        }
    }
}

impl OracleCaps {
    pub fn validate(&self) -> Result<()> {
        if self.max_subset_nodes == 0 || self.max_bruteforce_edges == 0 {
            return Err(Error::input("oracle caps must be positive"));
        }
        Ok(())
    }
}

/// Covers the halo family of one core without touching any other core.
///
/// `alpha` is the declared approximation quality of the returned covers.
/// `Ok(None)` means no restricted cover exists.
pub trait RestrictedCoverOracle {
    fn alpha(&self) -> f64;
    fn restricted_cover(&self, state: &ResidualState<'_>, core: NodeId) -> Result<Option<EdgeSet>>;
}

/// Exhaustive restricted covers (`alpha = 1`).
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle {
    pub caps: OracleCaps,
}

impl ExactOracle {
    pub fn new(caps: OracleCaps) -> Self {
        Self { caps }
    }
}

impl RestrictedCoverOracle for ExactOracle {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn restricted_cover(&self, state: &ResidualState<'_>, core: NodeId) -> Result<Option<EdgeSet>> {
        exact_restricted_cover(state, core, &self.caps)
    }
}

/// Prim-style growth from the core until its component stops violating.
/// Cheap, with no approximation guarantee (`alpha` is infinite).
#[derive(Debug, Clone, Copy, Default)]
pub struct GrowthOracle;

impl RestrictedCoverOracle for GrowthOracle {
    fn alpha(&self) -> f64 {
        f64::INFINITY
    }

    fn restricted_cover(&self, state: &ResidualState<'_>, core: NodeId) -> Result<Option<EdgeSet>> {
        check_core(state, core)?;
        let h = state.contracted();
        let family = state.family();
        let mut inside = vec![false; h.node_count()];
        inside[core] = true;
        let mut attrs = state.attrs(core).clone();
        let mut heap = std::collections::BinaryHeap::new();
        let push_edges = |x: NodeId, heap: &mut std::collections::BinaryHeap<_>| {
            for &e in h.incident(x) {
                heap.push(std::cmp::Reverse((h.edge(e).cost, e)));
            }
        };
        push_edges(core, &mut heap);
        let mut chosen = Vec::new();
        while family.violates(&attrs) {
            let next = loop {
                let Some(std::cmp::Reverse((_, e))) = heap.pop() else {
                    return Ok(None);
                };
                let edge = h.edge(e);
                let y = if inside[edge.u] { edge.v } else { edge.u };
                if !inside[y] && !state.is_core(y) {
                    break (e, y);
                }
            };
            let (e, y) = next;
            inside[y] = true;
            chosen.push(e);
            attrs.merge(state.attrs(y));
            push_edges(y, &mut heap);
        }
        Ok(Some(state.lift(chosen)))
    }
}

fn check_core(state: &ResidualState<'_>, core: NodeId) -> Result<()> {
    if !state.is_core(core) {
        return Err(Error::input(format!("supernode {core} is not a core")));
    }
    Ok(())
}

/// Minimum-cost restricted cover of `core`: the cheapest spanning tree of a
/// connected supernode set `W ∋ core` avoiding every other core whose merged
/// attributes no longer violate. Returned with base edge ids.
pub fn exact_restricted_cover(
    state: &ResidualState<'_>,
    core: NodeId,
    caps: &OracleCaps,
) -> Result<Option<EdgeSet>> {
    check_core(state, core)?;
    let h = state.contracted();
    let n = h.node_count();
    if n > caps.max_subset_nodes {
        return Err(Error::cap("contracted nodes", caps.max_subset_nodes, n));
    }
    let family = state.family();
    let free: Vec<NodeId> = (0..n).filter(|&v| v != core && !state.is_core(v)).collect();
    let mut allowed = vec![false; n];
    allowed[core] = true;
    for &v in &free {
        allowed[v] = true;
    }
    // cheapest edge from each node into the allowed region
    let cheapest: Vec<Option<Cost>> = (0..n)
        .map(|v| {
            h.incident(v)
                .iter()
                .filter(|&&e| allowed[h.edge(e).other(v)])
                .map(|&e| h.edge(e).cost)
                .min()
        })
        .collect();
    let Some(core_min) = cheapest[core] else {
        return Ok(None);
    };

    let k = free.len();
    let mut best: Option<(Cost, EdgeSet)> = None;
    let mut inside = vec![false; n];
    for size in 1..=k {
        for_each_combination(k, size, |mask| {
            let mut lower = core_min;
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    match cheapest[v] {
                        Some(c) => lower += c,
                        None => return,
                    }
                }
            }
            if let Some((b, _)) = &best {
                if lower > 2 * b {
                    return;
                }
            }
            let mut attrs = state.attrs(core).clone();
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    attrs.merge(state.attrs(v));
                }
            }
            if family.violates(&attrs) {
                return;
            }
            inside.iter_mut().for_each(|b| *b = false);
            inside[core] = true;
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    inside[v] = true;
                }
            }
            let Some(tree) = mst_on_mask(h, &inside, size + 1) else {
                return;
            };
            let cost = h.cost_of(&tree);
            let lifted = state.lift(tree.iter());
            let better = match &best {
                None => true,
                Some((b, edges)) => cost < *b || (cost == *b && lifted < *edges),
            };
            if better {
                best = Some((cost, lifted));
            }
        });
    }
    Ok(best.map(|(_, e)| e))
}

/// Calls `f` on every `size`-element subset of `0..k`, as a bitmask, in
/// increasing numeric order.
fn for_each_combination(k: usize, size: usize, mut f: impl FnMut(u64)) {
    if size > k {
        return;
    }
    let mut mask: u64 = (1u64 << size) - 1;
    let limit = 1u64 << k;
    while mask < limit {
        f(mask);
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

fn cover_test<'f>(family: &'f Family, g: &'f WeightedGraph) -> impl Fn(&[EdgeId]) -> bool + 'f {
    move |j: &[EdgeId]| match family.spec() {
        FamilySpec::Explicit(f) => crosses_all(f.members(), g, &EdgeSet::new(j.to_vec())),
        _ => components_feasible(family, g, j, false),
    }
}

/// Optimal cover by exhaustive search over forests. Among optimal forests
/// the lexicographically smallest edge-id list is returned.
pub fn brute_force_cover(
    family: &Family,
    g: &WeightedGraph,
    caps: &OracleCaps,
) -> Result<Option<EdgeSet>> {
    if family.node_count() != g.node_count() {
        return Err(Error::input("family and graph sizes differ"));
    }
    if g.edge_count() > caps.max_bruteforce_edges {
        return Err(Error::cap(
            "brute-force edges",
            caps.max_bruteforce_edges,
            g.edge_count(),
        ));
    }
    let covers = cover_test(family, g);
    let mut search = ForestSearch {
        g,
        parent: (0..g.node_count()).collect(),
        chosen: Vec::new(),
        best: None,
        covers: &covers,
    };
    search.run(0, 0);
    Ok(search.best.map(|(_, e)| EdgeSet::new(e)))
}

struct ForestSearch<'a, F: Fn(&[EdgeId]) -> bool> {
    g: &'a WeightedGraph,
    parent: Vec<NodeId>,
    chosen: Vec<EdgeId>,
    best: Option<(Cost, Vec<EdgeId>)>,
    covers: &'a F,
}

impl<F: Fn(&[EdgeId]) -> bool> ForestSearch<'_, F> {
    fn find(&self, mut x: NodeId) -> NodeId {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn run(&mut self, next: EdgeId, cost: Cost) {
        if let Some((b, _)) = &self.best {
            if cost > *b {
                return;
            }
        }
        if next == self.g.edge_count() {
            if (self.covers)(&self.chosen) {
                let better = match &self.best {
                    None => true,
                    Some((b, edges)) => cost < *b || (cost == *b && self.chosen < *edges),
                };
                if better {
                    self.best = Some((cost, self.chosen.clone()));
                }
            }
            return;
        }
        let edge = self.g.edge(next);
        let (ru, rv) = (self.find(edge.u), self.find(edge.v));
        if ru != rv {
            self.parent[ru] = rv;
            self.chosen.push(next);
            self.run(next + 1, cost + edge.cost);
            self.chosen.pop();
            self.parent[ru] = ru;
        }
        self.run(next + 1, cost);
    }
}

/// Reverse-delete: scans edges by decreasing `(cost, id)` and drops every
/// edge whose removal keeps a cover. The result is an inclusion-minimal
/// cover and a forest.
pub fn prune_minimal(family: &Family, g: &WeightedGraph, j: &EdgeSet) -> Result<EdgeSet> {
    if !is_cover(family, g, j)? {
        return Err(Error::input("edge set to prune is not a cover"));
    }
    let covers = cover_test(family, g);
    let mut order: Vec<EdgeId> = j.iter().collect();
    order.sort_unstable_by_key(|&e| std::cmp::Reverse((g.edge(e).cost, e)));
    let mut kept: Vec<EdgeId> = j.iter().collect();
    for e in order {
        let trial: Vec<EdgeId> = kept.iter().copied().filter(|&x| x != e).collect();
        if covers(&trial) {
            kept = trial;
        }
    }
    Ok(EdgeSet::new(kept))
}
