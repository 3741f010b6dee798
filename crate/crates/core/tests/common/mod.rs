#![allow(dead_code)]

use famcover::{Cost, EdgeSet, NodeId, WeightedGraph};
use proptest::prelude::*;

pub type RawEdges = Vec<(NodeId, NodeId, Cost)>;

/// Random multigraph with `2..=max_n` nodes and up to `max_m` edges.
pub fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, RawEdges)> {
    (2..=max_n).prop_flat_map(move |n| {
        let edge = (0..n, 0..n - 1, 0i64..=20).prop_map(move |(u, d, c)| {
            let v = (u + 1 + d) % n;
            (u, v, c)
        });
        (Just(n), prop::collection::vec(edge, 0..=max_m))
    })
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn arb_connected(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, RawEdges)> {
    (2..=max_n).prop_flat_map(move |n| {
        let tree = prop::collection::vec((any::<prop::sample::Index>(), 1i64..=20), n - 1);
        let extra = prop::collection::vec((0..n, 0..n - 1, 1i64..=20), 0..=max_m.saturating_sub(n - 1));
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges: RawEdges = tree
                .into_iter()
                .enumerate()
                .map(|(i, (idx, c))| (idx.index(i + 1), i + 1, c))
                .collect();
            edges.extend(extra.into_iter().map(|(u, d, c)| (u, (u + 1 + d) % n, c)));
            edges
        })
        .prop_map(move |edges| (n, edges))
    })
}

pub fn build(n: usize, edges: &RawEdges) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges).unwrap()
}

pub fn all_edges(g: &WeightedGraph) -> EdgeSet {
    (0..g.edge_count()).collect()
}

pub fn mask_nodes(mask: u32, n: usize) -> Vec<NodeId> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Minimum spanning tree cost of the subgraph induced by `mask`, by brute
/// force over edge subsets of size `|mask| - 1`.
pub fn brute_tree_cost(g: &WeightedGraph, mask: u32) -> Option<Cost> {
    let nodes = mask_nodes(mask, g.node_count());
    let inner: Vec<usize> = (0..g.edge_count())
        .filter(|&e| mask >> g.edge(e).u & 1 == 1 && mask >> g.edge(e).v & 1 == 1)
        .collect();
    if nodes.len() == 1 {
        return Some(0);
    }
    let mut best: Option<Cost> = None;
    for pick in 0u32..(1 << inner.len()) {
        if pick.count_ones() as usize != nodes.len() - 1 {
            continue;
        }
        let chosen: Vec<usize> = (0..inner.len())
            .filter(|&i| pick >> i & 1 == 1)
            .map(|i| inner[i])
            .collect();
        // connected check by repeated relaxation
        let mut reach = 1u32 << nodes[0];
        loop {
            let before = reach;
            for &e in &chosen {
                let (u, v) = (g.edge(e).u, g.edge(e).v);
                if reach >> u & 1 == 1 || reach >> v & 1 == 1 {
                    reach |= 1 << u | 1 << v;
                }
            }
            if reach == before {
                break;
            }
        }
        if reach == mask {
            let c: Cost = chosen.iter().map(|&e| g.edge(e).cost).sum();
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    best
}

/// All-pairs shortest paths by Floyd–Warshall.
pub fn floyd(g: &WeightedGraph) -> Vec<Vec<Option<Cost>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for e in g.edges() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if d[a][b].is_none_or(|x| e.cost < x) {
                d[a][b] = Some(e.cost);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|x| a + b < x) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}
