//! Undirected weighted multigraphs and the handful of graph routines every
//! solver in the crate is built on: components, Dijkstra, induced MSTs,
//! contraction and forest checks.
//!
//! Ties are always broken by `(cost, edge-id)` so results never depend on
//! iteration order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
/// Exact edge cost. Decimal inputs are scaled to integers at parse time.
pub type Cost = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Cost,
}

impl Edge {
    /// The endpoint opposite `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph with non-negative costs. Node ids are dense and
/// follow label order; edge ids are dense and follow insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    adj: Vec<Vec<EdgeId>>,
}

impl WeightedGraph {
    /// Graph on `n` nodes labelled `"0"`, `"1"`, ...
    pub fn new(n: usize) -> Self {
        Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::input(format!("duplicate node label {l:?}")));
            }
        }
        let n = labels.len();
        Ok(Self {
            labels,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        })
    }

    /// Convenience constructor used heavily in tests.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, Cost)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, cost: Cost) -> Result<EdgeId> {
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(Error::input(format!("edge ({u},{v}) references a node outside 0..{n}")));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at node {u}")));
        }
        if cost < 0 {
            return Err(Error::input(format!("negative cost {cost} on edge ({u},{v})")));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, cost });
        self.adj[u].push(id);
        self.adj[v].push(id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edge ids incident to `v`, in insertion order.
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn cost_of(&self, set: &EdgeSet) -> Cost {
        set.iter().map(|e| self.edges[e].cost).sum()
    }
}

/// Sorted, duplicate-free list of edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new(mut ids: Vec<EdgeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut ids = self.0.clone();
        ids.extend_from_slice(&other.0);
        EdgeSet::new(ids)
    }

    pub fn without(&self, id: EdgeId) -> EdgeSet {
        EdgeSet(self.0.iter().copied().filter(|&e| e != id).collect())
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        match self.0.last() {
            Some(&e) if e >= g.edge_count() => Err(Error::input(format!(
                "edge id {e} out of range (graph has {} edges)",
                g.edge_count()
            ))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::new(iter.into_iter().collect())
    }
}

/// Assignment of every node to a component; component ids are dense and
/// ordered by the smallest node they contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    comp: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary labels, renumbering them densely by
    /// first occurrence (which is smallest node id).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = BTreeMap::new();
        let mut comp = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = remap.len();
            comp.push(*remap.entry(l).or_insert(next));
        }
        Self {
            count: remap.len(),
            comp,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            comp: (0..n).collect(),
            count: n,
        }
    }

    pub fn component(&self, v: NodeId) -> usize {
        self.comp[v]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.comp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comp.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.comp
    }

    /// Node lists per component, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut blocks = vec![Vec::new(); self.count];
        for (v, &c) in self.comp.iter().enumerate() {
            blocks[c].push(v);
        }
        blocks
    }
}

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub(crate) fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|v| self.find(v)).collect();
        Partition::from_labels(&roots)
    }
}

pub fn connected_components(g: &WeightedGraph, j: &EdgeSet) -> Result<Partition> {
    j.validate(g)?;
    let mut uf = UnionFind::new(g.node_count());
    for e in j.iter() {
        let edge = g.edge(e);
        uf.union(edge.u, edge.v);
    }
    Ok(uf.partition())
}

/// Single-source shortest-path tree.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: NodeId,
    /// `None` means unreachable.
    pub dist: Vec<Option<Cost>>,
    pub parent: Vec<Option<EdgeId>>,
}

impl ShortestPaths {
    /// Edge ids on the tree path from the source to `target`, source side first.
    pub fn path_to(&self, g: &WeightedGraph, target: NodeId) -> Option<Vec<EdgeId>> {
        self.dist[target]?;
        let mut path = Vec::new();
        let mut at = target;
        while let Some(e) = self.parent[at] {
            path.push(e);
            at = g.edge(e).other(at);
        }
        path.reverse();
        Some(path)
    }
}

/// Dijkstra from `source` in `g` with the `forbidden` nodes deleted. Among
/// equally short paths the parent edge is the smallest tight edge id.
pub fn shortest_paths(
    g: &WeightedGraph,
    source: NodeId,
    forbidden: &[NodeId],
) -> Result<ShortestPaths> {
    let n = g.node_count();
    if source >= n {
        return Err(Error::input(format!("source {source} out of range")));
    }
    let mut blocked = vec![false; n];
    for &f in forbidden {
        if f >= n {
            return Err(Error::input(format!("forbidden node {f} out of range")));
        }
        blocked[f] = true;
    }
    if blocked[source] {
        return Err(Error::input("source node is forbidden"));
    }
    Ok(dijkstra(g, source, &blocked))
}

pub(crate) fn dijkstra(g: &WeightedGraph, source: NodeId, blocked: &[bool]) -> ShortestPaths {
    let n = g.node_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &e in g.incident(x) {
            let edge = g.edge(e);
            let y = edge.other(x);
            if blocked[y] || done[y] {
                continue;
            }
            let nd = d + edge.cost;
            let better = match dist[y] {
                None => true,
                Some(old) => nd < old || (nd == old && parent[y].is_some_and(|p| e < p)),
            };
            if better {
                if dist[y] != Some(nd) {
                    heap.push(Reverse((nd, y)));
                }
                dist[y] = Some(nd);
                parent[y] = Some(e);
            }
        }
    }
    ShortestPaths {
        source,
        dist,
        parent,
    }
}

fn sorted_by_cost(g: &WeightedGraph, ids: impl Iterator<Item = EdgeId>) -> Vec<EdgeId> {
    let mut ids: Vec<EdgeId> = ids.collect();
    ids.sort_unstable_by_key(|&e| (g.edge(e).cost, e));
    ids
}

/// Minimum spanning tree of the subgraph induced by `w`, or `None` when that
/// subgraph is disconnected.
pub fn mst_induced(g: &WeightedGraph, w: &[NodeId]) -> Result<Option<EdgeSet>> {
    let n = g.node_count();
    if w.is_empty() {
        return Err(Error::input("mst_induced needs a non-empty node set"));
    }
    let mut inside = vec![false; n];
    for &v in w {
        if v >= n {
            return Err(Error::input(format!("node {v} out of range")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    Ok(mst_on_mask(g, &inside, size))
}

pub(crate) fn mst_on_mask(g: &WeightedGraph, inside: &[bool], size: usize) -> Option<EdgeSet> {
    let candidates = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| inside[e.u] && inside[e.v])
        .map(|(i, _)| i);
    let mut uf = UnionFind::new(g.node_count());
    let mut tree = Vec::with_capacity(size.saturating_sub(1));
    for e in sorted_by_cost(g, candidates) {
        let edge = g.edge(e);
        if uf.union(edge.u, edge.v) {
            tree.push(e);
            if tree.len() + 1 == size {
                break;
            }
        }
    }
    (tree.len() + 1 == size).then(|| EdgeSet::new(tree))
}

/// Minimum spanning forest of `(V, j)`: drops cycle edges while keeping the
/// components of `j` unchanged.
pub fn spanning_forest(g: &WeightedGraph, j: &EdgeSet) -> EdgeSet {
    let mut uf = UnionFind::new(g.node_count());
    sorted_by_cost(g, j.iter())
        .into_iter()
        .filter(|&e| uf.union(g.edge(e).u, g.edge(e).v))
        .collect()
}

pub fn is_forest(g: &WeightedGraph, j: &EdgeSet) -> Result<bool> {
    j.validate(g)?;
    let mut uf = UnionFind::new(g.node_count());
    Ok(j.iter().all(|e| uf.union(g.edge(e).u, g.edge(e).v)))
}

/// Result of collapsing the blocks of a partition into supernodes.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: WeightedGraph,
    /// Base nodes of each supernode, sorted.
    pub blocks: Vec<Vec<NodeId>>,
    /// Base edge id behind each contracted edge.
    pub origin: Vec<EdgeId>,
}

impl Contraction {
    /// Maps contracted edge ids back to base edge ids.
    pub fn lift(&self, ids: impl IntoIterator<Item = EdgeId>) -> EdgeSet {
        ids.into_iter().map(|e| self.origin[e]).collect()
    }
}

/// One supernode per block; loops vanish and each bundle of parallel edges
/// keeps only its cheapest member (ties to the smaller base id).
pub fn contract(g: &WeightedGraph, p: &Partition) -> Result<Contraction> {
    if p.len() != g.node_count() {
        return Err(Error::input(format!(
            "partition covers {} nodes, graph has {}",
            p.len(),
            g.node_count()
        )));
    }
    let blocks = p.blocks();
    let labels: Vec<String> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&v| g.label(v))
                .collect::<Vec<_>>()
                .join("+")
        })
        .collect();
    let mut best: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        let (a, b) = (p.component(e.u), p.component(e.v));
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        best.entry(key)
            .and_modify(|cur| {
                if (e.cost, id) < (g.edge(*cur).cost, *cur) {
                    *cur = id;
                }
            })
            .or_insert(id);
    }
    let mut graph = WeightedGraph::with_labels(labels)?;
    let mut origin = Vec::with_capacity(best.len());
    for ((a, b), id) in best {
        graph.add_edge(a, b, g.edge(id).cost)?;
        origin.push(id);
    }
    Ok(Contraction {
        graph,
        blocks,
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        // a-b (1), b-c (2)
        WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap()
    }

    fn cycle4() -> WeightedGraph {
        // a-b 1, b-c 1, c-d 1, d-a 5
        WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 5)]).unwrap()
    }

    #[test]
    fn components_of_path() {
        let g = path3();
        assert_eq!(connected_components(&g, &EdgeSet::empty()).unwrap().count(), 3);
        let p = connected_components(&g, &EdgeSet::new(vec![0])).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2]]);
        let p = connected_components(&g, &EdgeSet::new(vec![0, 1])).unwrap();
        assert_eq!(p.count(), 1);
        assert!(connected_components(&g, &EdgeSet::new(vec![7])).is_err());
    }

    #[test]
    fn dijkstra_examples() {
        let g = path3();
        let sp = shortest_paths(&g, 0, &[]).unwrap();
        assert_eq!(sp.dist, vec![Some(0), Some(1), Some(3)]);
        let sp = shortest_paths(&g, 0, &[1]).unwrap();
        assert_eq!(sp.dist[2], None);
        assert!(shortest_paths(&g, 1, &[1]).is_err());

        let g = cycle4();
        let sp = shortest_paths(&g, 0, &[]).unwrap();
        assert_eq!(sp.dist[2], Some(2));
        assert_eq!(sp.path_to(&g, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn dijkstra_prefers_smaller_edge_on_ties() {
        // two parallel a-b edges of equal cost
        let g = WeightedGraph::from_edges(2, &[(0, 1, 3), (0, 1, 3)]).unwrap();
        let sp = shortest_paths(&g, 0, &[]).unwrap();
        assert_eq!(sp.parent[1], Some(0));
    }

    #[test]
    fn induced_mst_examples() {
        let g = path3();
        let t = mst_induced(&g, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(g.cost_of(&t), 3);
        assert_eq!(mst_induced(&g, &[0, 2]).unwrap(), None);
        assert_eq!(mst_induced(&g, &[1]).unwrap(), Some(EdgeSet::empty()));

        let g = cycle4();
        let t = mst_induced(&g, &[0, 1, 2, 3]).unwrap().unwrap();
        assert_eq!(t, EdgeSet::new(vec![0, 1, 2]));
        assert_eq!(g.cost_of(&t), 3);
    }

    #[test]
    fn contraction_examples() {
        let g = path3();
        let c = contract(&g, &Partition::from_labels(&[0, 0, 1])).unwrap();
        assert_eq!(c.graph.node_count(), 2);
        assert_eq!(c.graph.edge_count(), 1);
        assert_eq!(c.graph.edge(0).cost, 2);
        assert_eq!(c.origin, vec![1]);
        assert_eq!(c.graph.label(0), "0+1");

        let c = contract(&g, &Partition::identity(3)).unwrap();
        assert_eq!(c.graph.edges(), g.edges());

        // triangle 1,2,3; merge the ends of the cost-1 edge
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
        let c = contract(&g, &Partition::from_labels(&[0, 0, 1])).unwrap();
        assert_eq!(c.graph.edge_count(), 1);
        assert_eq!(c.graph.edge(0).cost, 2);
        assert_eq!(c.origin, vec![1]);
        assert_eq!(c.blocks, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn forest_checks() {
        let tri = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
        assert!(is_forest(&tri, &EdgeSet::empty()).unwrap());
        assert!(!is_forest(&tri, &EdgeSet::new(vec![0, 1, 2])).unwrap());
        assert!(is_forest(&path3(), &EdgeSet::new(vec![0, 1])).unwrap());
        assert_eq!(
            spanning_forest(&tri, &EdgeSet::new(vec![0, 1, 2])),
            EdgeSet::new(vec![0, 1])
        );
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = WeightedGraph::new(2);
        assert!(g.add_edge(0, 0, 1).is_err());
        assert!(g.add_edge(0, 1, -1).is_err());
        assert!(g.add_edge(0, 2, 1).is_err());
        assert!(WeightedGraph::with_labels(["a", "a"]).is_err());
    }
}
