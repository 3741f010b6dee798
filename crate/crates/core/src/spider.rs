//! Spiders: decomposition of terminal trees and minimum-density search.

use std::collections::BTreeSet;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::graph::{dijkstra, is_forest, Cost, EdgeId, EdgeSet, NodeId, WeightedGraph};
use crate::residual::ResidualState;

/// A tree in which every node except the root has degree at most 2.
/// Terminals sit only at the root or at leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spider {
    pub root: NodeId,
    pub edges: EdgeSet,
    pub terminals: Vec<NodeId>,
}

impl Spider {
    /// Nodes of the spider, sorted.
    pub fn nodes(&self, g: &WeightedGraph) -> Vec<NodeId> {
        let mut nodes: BTreeSet<NodeId> = BTreeSet::from([self.root]);
        for e in self.edges.iter() {
            nodes.insert(g.edge(e).u);
            nodes.insert(g.edge(e).v);
        }
        nodes.into_iter().collect()
    }

    /// Checks the spider shape against the terminal set it was cut from.
    pub fn is_valid(&self, g: &WeightedGraph, terminals: &[NodeId]) -> bool {
        if self.edges.validate(g).is_err() || !is_forest(g, &self.edges).unwrap_or(false) {
            return false;
        }
        let nodes = self.nodes(g);
        if nodes.len() < 2 || nodes.len() != self.edges.len() + 1 {
            return false;
        }
        let mut degree = vec![0usize; g.node_count()];
        for e in self.edges.iter() {
            degree[g.edge(e).u] += 1;
            degree[g.edge(e).v] += 1;
        }
        let is_terminal = |v: &NodeId| terminals.contains(v);
        let shape_ok = nodes.iter().all(|&v| {
            if v == self.root {
                return true;
            }
            let d = degree[v];
            if is_terminal(&v) {
                d == 1
            } else {
                d == 2
            }
        });
        let expected: Vec<NodeId> = nodes.iter().copied().filter(is_terminal).collect();
        shape_ok && expected == self.terminals
    }
}

/// Splits a tree into node-disjoint spiders that together hold every
/// terminal, each spider containing at least two terminals.
pub fn kr_decompose(
    g: &WeightedGraph,
    tree: &EdgeSet,
    terminals: &[NodeId],
) -> Result<Vec<Spider>> {
    tree.validate(g)?;
    let n = g.node_count();
    let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); n];
    let mut in_tree = vec![false; n];
    for e in tree.iter() {
        let edge = g.edge(e);
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
        in_tree[edge.u] = true;
        in_tree[edge.v] = true;
    }
    let node_count = in_tree.iter().filter(|&&b| b).count();
    if !is_forest(g, tree)? || node_count != tree.len() + 1 {
        return Err(Error::input("edge set is not a tree"));
    }
    let mut is_term = vec![false; n];
    for &t in terminals {
        if t >= n || !in_tree[t] {
            return Err(Error::input(format!("terminal {t} is not a tree node")));
        }
        is_term[t] = true;
    }
    if is_term.iter().filter(|&&b| b).count() < 2 {
        return Err(Error::input("at least two terminals are required"));
    }

    let mut alive = in_tree;
    let mut spiders = Vec::new();
    loop {
        strip_leaves(&adj, &mut alive, &is_term);
        let remaining = (0..n).filter(|&v| alive[v] && is_term[v]).count();
        if remaining < 2 {
            break;
        }
        let degree = |v: NodeId, alive: &[bool]| adj[v].iter().filter(|(w, _)| alive[*w]).count();
        let root = (0..n)
            .find(|&v| alive[v] && is_term[v] && degree(v, &alive) <= 1)
            .expect("a stripped tree has terminal leaves");

        // rooted traversal
        let mut order = vec![root];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(y, _) in &adj[x] {
                if alive[y] && y != parent[x] {
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    order.push(y);
                }
            }
        }
        let mut count = vec![0usize; n];
        for &x in order.iter().rev() {
            count[x] += usize::from(is_term[x]);
            if x != root {
                count[parent[x]] += count[x];
            }
        }
        let s = order
            .iter()
            .copied()
            .filter(|&x| count[x] >= 2)
            .max_by_key(|&x| (depth[x], std::cmp::Reverse(x)))
            .expect("the root subtree holds every terminal");

        let whole = remaining - count[s] <= 1;
        let members: Vec<NodeId> = if whole {
            order.clone()
        } else {
            let mut sub = vec![s];
            let mut k = 0;
            while k < sub.len() {
                let x = sub[k];
                k += 1;
                for &(y, _) in &adj[x] {
                    if alive[y] && y != parent[x] {
                        sub.push(y);
                    }
                }
            }
            sub
        };
        let mut inside = vec![false; n];
        for &v in &members {
            inside[v] = true;
        }
        let edges: EdgeSet = members
            .iter()
            .flat_map(|&x| adj[x].iter().filter(|(y, _)| inside[*y]).map(|&(_, e)| e))
            .collect();
        let neighbours: Vec<NodeId> = adj[s]
            .iter()
            .filter(|(y, _)| inside[*y])
            .map(|&(y, _)| y)
            .collect();
        let spider_root = if is_term[s] && neighbours.len() == 1 {
            neighbours[0]
        } else {
            s
        };
        let mut spider_terms: Vec<NodeId> =
            members.iter().copied().filter(|&v| is_term[v]).collect();
        spider_terms.sort_unstable();
        spiders.push(Spider {
            root: spider_root,
            edges,
            terminals: spider_terms,
        });
        if whole {
            break;
        }
        for v in members {
            alive[v] = false;
        }
    }
    Ok(spiders)
}

fn strip_leaves(adj: &[Vec<(NodeId, EdgeId)>], alive: &mut [bool], is_term: &[bool]) {
    let degree = |v: NodeId, alive: &[bool]| adj[v].iter().filter(|(w, _)| alive[*w]).count();
    let mut stack: Vec<NodeId> = (0..alive.len())
        .filter(|&v| alive[v] && !is_term[v] && degree(v, alive) <= 1)
        .collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(w, _) in &adj[v] {
            if alive[w] && !is_term[w] && degree(w, alive) <= 1 {
                stack.push(w);
            }
        }
    }
}

/// A center joined by shortest paths to `p >= 2` cores of a residual state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiderCandidate {
    /// Supernode of the contracted graph.
    pub center: NodeId,
    /// Core supernodes, nearest first.
    pub chosen_cores: Vec<NodeId>,
    /// Base edge ids of the union of the legs.
    pub edges: EdgeSet,
    /// Sum of the leg lengths.
    pub estimated_cost: Cost,
    /// `estimated_cost / (p - 1)`.
    pub estimated_density: Density,
}

/// Scans every center and every prefix of its distance-sorted cores and
/// returns the cheapest cost per `p - 1`, ties broken by center then `p`.
/// `None` when no two cores can reach each other.
pub fn min_density_spider(state: &ResidualState<'_>) -> Result<Option<SpiderCandidate>> {
    let cores = state.cores();
    if cores.len() < 2 {
        return Err(Error::input("a spider needs at least two cores"));
    }
    let h = state.contracted();
    let blocked = vec![false; h.node_count()];
    let mut best: Option<(Density, NodeId, usize, Vec<NodeId>, Cost)> = None;
    let mut best_tree = None;
    for center in 0..h.node_count() {
        let sp = dijkstra(h, center, &blocked);
        let mut reach: Vec<(Cost, NodeId)> = cores
            .iter()
            .filter_map(|&c| sp.dist[c].map(|d| (d, c)))
            .collect();
        reach.sort_unstable();
        let mut sum = 0;
        for (i, &(d, _)) in reach.iter().enumerate() {
            sum += d;
            let p = i + 1;
            if p < 2 {
                continue;
            }
            let score = Density::new(sum, (p - 1) as u64);
            let better = match &best {
                None => true,
                Some((b, _, _, _, _)) => score < *b,
            };
            if better {
                let chosen = reach[..p].iter().map(|&(_, c)| c).collect();
                best = Some((score, center, p, chosen, sum));
                best_tree = Some(sp.clone());
            }
        }
    }
    let Some((density, center, _, chosen, cost)) = best else {
        return Ok(None);
    };
    let sp = best_tree.expect("tree stored with best");
    let contracted: BTreeSet<EdgeId> = chosen
        .iter()
        .flat_map(|&c| sp.path_to(h, c).expect("chosen cores are reachable"))
        .collect();
    Ok(Some(SpiderCandidate {
        center,
        chosen_cores: chosen,
        edges: state.lift(contracted),
        estimated_cost: cost,
        estimated_density: density,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Family, FamilySpec};
    use crate::residual::residual;

    fn all_edges(g: &WeightedGraph) -> EdgeSet {
        (0..g.edge_count()).collect()
    }

    #[test]
    fn path_is_one_spider() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let s = kr_decompose(&g, &all_edges(&g), &[0, 2]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].terminals, vec![0, 2]);
        assert!(s[0].is_valid(&g, &[0, 2]));
    }

    #[test]
    fn star_is_one_spider() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let s = kr_decompose(&g, &all_edges(&g), &[1, 2, 3]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].root, 0);
        assert!(s[0].is_valid(&g, &[1, 2, 3]));
    }

    #[test]
    fn double_star_splits() {
        // t1=0 s1=1 t2=2 s2=3 t3=4 t4=5
        let g = WeightedGraph::from_edges(
            6,
            &[(0, 1, 1), (1, 2, 1), (1, 3, 1), (4, 3, 1), (3, 5, 1)],
        )
        .unwrap();
        let terms = [0, 2, 4, 5];
        let s = kr_decompose(&g, &all_edges(&g), &terms).unwrap();
        let roots: Vec<NodeId> = s.iter().map(|x| x.root).collect();
        assert_eq!(roots, vec![3, 1]);
        assert!(s.iter().all(|x| x.is_valid(&g, &terms)));
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert!(kr_decompose(&g, &all_edges(&g), &[0, 2]).is_err());
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(kr_decompose(&g, &all_edges(&g), &[0]).is_err());
    }

    #[test]
    fn star_spider_density() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let f = Family::new(
            FamilySpec::Gp2p {
                charges: vec![0, -1, -1, -1],
            },
            4,
        )
        .unwrap();
        let st = residual(&f, &g, &EdgeSet::empty()).unwrap();
        let c = min_density_spider(&st).unwrap().unwrap();
        assert_eq!(c.center, 0);
        assert_eq!(c.chosen_cores.len(), 3);
        assert_eq!(c.estimated_density, Density::new(3, 2));
    }

    #[test]
    fn two_core_density() {
        // u1=0 u2=1 p1=2 p2=3
        let g = WeightedGraph::from_edges(4, &[(0, 2, 1), (1, 3, 1), (0, 1, 10)]).unwrap();
        let f = Family::new(
            FamilySpec::Gp2p {
                charges: vec![-1, -1, 1, 1],
            },
            4,
        )
        .unwrap();
        let st = residual(&f, &g, &EdgeSet::empty()).unwrap();
        let c = min_density_spider(&st).unwrap().unwrap();
        assert_eq!((c.center, c.estimated_cost), (0, 10));
        assert_eq!(c.edges, EdgeSet::new(vec![2]));
    }

    #[test]
    fn unreachable_cores() {
        let g = WeightedGraph::new(2);
        let f = Family::new(FamilySpec::Gp2p { charges: vec![-1, -1] }, 2).unwrap();
        let st = residual(&f, &g, &EdgeSet::empty()).unwrap();
        assert_eq!(min_density_spider(&st).unwrap(), None);
    }
}
