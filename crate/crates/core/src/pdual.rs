//! Primal-dual 2-approximation for proper families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::{Attrs, Family};
use crate::graph::{EdgeId, EdgeSet, NodeId, UnionFind, WeightedGraph};
use crate::residual::components_feasible;

/// Full record of a primal-dual run.
#[derive(Debug, Clone)]
pub struct GwRun {
    /// Final cover after reverse delete, `None` when growth stalled.
    pub edges: Option<EdgeSet>,
    /// Edges in purchase order, before reverse delete.
    pub purchased: Vec<EdgeId>,
    /// Every component that received a positive potential, with its value.
    pub duals: Vec<(Vec<NodeId>, BigRational)>,
}

impl GwRun {
    /// Sum of potentials of recorded sets crossed by each edge never
    /// exceeds that edge's cost.
    pub fn dual_feasible(&self, g: &WeightedGraph) -> bool {
        let n = g.node_count();
        let sets: Vec<(Vec<bool>, &BigRational)> = self
            .duals
            .iter()
            .map(|(nodes, y)| {
                let mut inside = vec![false; n];
                for &v in nodes {
                    inside[v] = true;
                }
                (inside, y)
            })
            .collect();
        g.edges().iter().all(|e| {
            let load = sets
                .iter()
                .filter(|(inside, _)| inside[e.u] != inside[e.v])
                .fold(BigRational::zero(), |acc, (_, y)| acc + *y);
            load <= BigRational::from_integer(BigInt::from(e.cost))
        })
    }

    /// Total dual value, a lower bound on the optimum.
    pub fn dual_value(&self) -> BigRational {
        self.duals
            .iter()
            .fold(BigRational::zero(), |acc, (_, y)| acc + y)
    }
}

struct Component {
    nodes: Vec<NodeId>,
    attrs: Attrs,
    y: BigRational,
}

/// Primal-dual cover: returns the pruned edge set or `None` if infeasible.
pub fn gw_solve(family: &Family, g: &WeightedGraph) -> Result<Option<EdgeSet>> {
    Ok(gw_run(family, g)?.edges)
}

/// Synchronized growth of all components that belong to the symmetric form
/// of the family, buying each edge as it becomes tight (ties by edge id),
/// then reverse delete in decreasing purchase order.
pub fn gw_run(family: &Family, g: &WeightedGraph) -> Result<GwRun> {
    if family.node_count() != g.node_count() {
        return Err(Error::input("family and graph sizes differ"));
    }
    if !family.is_known_proper() {
        return Err(Error::NotProper(format!(
            "{} family is not accepted by the primal-dual solver",
            family.spec().kind()
        )));
    }
    let n = g.node_count();
    let mut uf = UnionFind::new(n);
    let mut comps: Vec<Option<Component>> = (0..n)
        .map(|v| {
            Some(Component {
                nodes: vec![v],
                attrs: family.node_attrs(v).clone(),
                y: BigRational::zero(),
            })
        })
        .collect();
    let mut d = vec![BigRational::zero(); n];
    let mut duals = Vec::new();
    let mut purchased = Vec::new();
    let active_of = |c: &Option<Component>| {
        c.as_ref()
            .is_some_and(|c| family.violates_proper(&c.attrs))
    };
    loop {
        let roots: Vec<NodeId> = (0..n).map(|v| uf.find(v)).collect();
        let active: Vec<bool> = (0..n).map(|r| active_of(&comps[r])).collect();
        if !active.iter().any(|&a| a) {
            break;
        }
        let mut best: Option<(BigRational, EdgeId)> = None;
        for (id, e) in g.edges().iter().enumerate() {
            let (ru, rv) = (roots[e.u], roots[e.v]);
            if ru == rv {
                continue;
            }
            let rate = i64::from(active[ru]) + i64::from(active[rv]);
            if rate == 0 {
                continue;
            }
            let slack = BigRational::from_integer(BigInt::from(e.cost)) - &d[e.u] - &d[e.v];
            let t = slack / BigRational::from_integer(BigInt::from(rate));
            if best.as_ref().is_none_or(|(b, _)| t < *b) {
                best = Some((t, id));
            }
        }
        let Some((eps, id)) = best else {
            for c in comps.into_iter().flatten() {
                if c.y > BigRational::zero() {
                    duals.push((c.nodes, c.y));
                }
            }
            return Ok(GwRun {
                edges: None,
                purchased,
                duals,
            });
        };
        for v in 0..n {
            if active[roots[v]] {
                d[v] += &eps;
            }
        }
        for (r, c) in comps.iter_mut().enumerate() {
            if active[r] {
                if let Some(c) = c {
                    c.y += &eps;
                }
            }
        }
        let e = g.edge(id);
        let (ru, rv) = (roots[e.u], roots[e.v]);
        let a = comps[ru].take().expect("root has a component");
        let b = comps[rv].take().expect("root has a component");
        uf.union(ru, rv);
        let root = uf.find(ru);
        let mut attrs = a.attrs.clone();
        attrs.merge(&b.attrs);
        let mut nodes = a.nodes.clone();
        nodes.extend_from_slice(&b.nodes);
        nodes.sort_unstable();
        for c in [a, b] {
            if c.y > BigRational::zero() {
                duals.push((c.nodes, c.y));
            }
        }
        comps[root] = Some(Component {
            nodes,
            attrs,
            y: BigRational::zero(),
        });
        purchased.push(id);
    }
    for c in comps.into_iter().flatten() {
        if c.y > BigRational::zero() {
            duals.push((c.nodes, c.y));
        }
    }
    let mut kept = purchased.clone();
    for &e in purchased.iter().rev() {
        let trial: Vec<EdgeId> = kept.iter().copied().filter(|&x| x != e).collect();
        if components_feasible(family, g, &trial, true) {
            kept = trial;
        }
    }
    Ok(GwRun {
        edges: Some(EdgeSet::new(kept)),
        purchased,
        duals,
    })
}
