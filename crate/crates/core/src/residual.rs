//! Residual families: the state left after a partial solution has been
//! contracted, and cover verification built on it.

use crate::error::{Error, Result};
use crate::family::{Attrs, Family, FamilySpec};
use crate::graph::{
    connected_components, contract, Contraction, EdgeSet, NodeId, Partition, UnionFind,
    WeightedGraph,
};

/// The family restricted to sets not yet covered by `solution`, living on
/// the graph with every component of the solution contracted.
///
/// All edge sets accepted or returned use base edge ids.
#[derive(Debug, Clone)]
pub struct ResidualState<'a> {
    family: &'a Family,
    base: &'a WeightedGraph,
    solution: EdgeSet,
    contraction: Contraction,
    node_block: Vec<NodeId>,
    attrs: Vec<Attrs>,
    cores: Vec<NodeId>,
}

fn check_sizes(family: &Family, g: &WeightedGraph) -> Result<()> {
    if family.node_count() != g.node_count() {
        return Err(Error::input(format!(
            "family is defined on {} nodes, graph has {}",
            family.node_count(),
            g.node_count()
        )));
    }
    Ok(())
}

/// Builds the residual state of `family` after buying `j`.
pub fn residual<'a>(
    family: &'a Family,
    g: &'a WeightedGraph,
    j: &EdgeSet,
) -> Result<ResidualState<'a>> {
    check_sizes(family, g)?;
    let partition = connected_components(g, j)?;
    let contraction = contract(g, &partition)?;
    let attrs = contraction
        .blocks
        .iter()
        .map(|b| family.attrs_of(b))
        .collect();
    Ok(ResidualState::assemble(
        family,
        g,
        j.clone(),
        partition,
        contraction,
        attrs,
    ))
}

impl<'a> ResidualState<'a> {
    fn assemble(
        family: &'a Family,
        base: &'a WeightedGraph,
        solution: EdgeSet,
        partition: Partition,
        contraction: Contraction,
        attrs: Vec<Attrs>,
    ) -> Self {
        let cores = attrs
            .iter()
            .enumerate()
            .filter(|(_, a)| family.violates(a))
            .map(|(s, _)| s)
            .collect();
        Self {
            family,
            base,
            solution,
            contraction,
            node_block: partition.as_slice().to_vec(),
            attrs,
            cores,
        }
    }

    pub fn family(&self) -> &'a Family {
        self.family
    }

    pub fn base(&self) -> &'a WeightedGraph {
        self.base
    }

    pub fn solution(&self) -> &EdgeSet {
        &self.solution
    }

    pub fn contracted(&self) -> &WeightedGraph {
        &self.contraction.graph
    }

    pub fn contraction(&self) -> &Contraction {
        &self.contraction
    }

    /// Base nodes of every supernode.
    pub fn blocks(&self) -> &[Vec<NodeId>] {
        &self.contraction.blocks
    }

    /// Supernode containing base node `v`.
    pub fn block_of(&self, v: NodeId) -> NodeId {
        self.node_block[v]
    }

    pub fn attrs(&self, supernode: NodeId) -> &Attrs {
        &self.attrs[supernode]
    }

    /// Supernodes whose merged attributes violate the family constraint.
    pub fn cores(&self) -> &[NodeId] {
        &self.cores
    }

    pub fn core_count(&self) -> usize {
        self.cores.len()
    }

    pub fn is_core(&self, supernode: NodeId) -> bool {
        self.cores.binary_search(&supernode).is_ok()
    }

    /// Maps contracted edge ids to base edge ids.
    pub fn lift(&self, contracted: impl IntoIterator<Item = usize>) -> EdgeSet {
        self.contraction.lift(contracted)
    }

    /// Number of cores that would remain after also buying `extra`.
    pub fn cores_after(&self, extra: &EdgeSet) -> Result<usize> {
        extra.validate(self.base)?;
        let mut uf = UnionFind::new(self.attrs.len());
        let mut touched = false;
        for e in extra.iter() {
            let edge = self.base.edge(e);
            touched |= uf.union(self.node_block[edge.u], self.node_block[edge.v]);
        }
        if !touched {
            return Ok(self.cores.len());
        }
        let mut merged: Vec<Option<Attrs>> = vec![None; self.attrs.len()];
        for (s, a) in self.attrs.iter().enumerate() {
            let r = uf.find(s);
            match &mut merged[r] {
                Some(acc) => acc.merge(a),
                slot => *slot = Some(a.clone()),
            }
        }
        Ok(merged
            .iter()
            .flatten()
            .filter(|a| self.family.violates(a))
            .count())
    }

    /// Residual state after also buying `extra`, merging the existing
    /// supernode attributes instead of recomputing them from base nodes.
    pub fn absorb(&self, extra: &EdgeSet) -> Result<ResidualState<'a>> {
        extra.validate(self.base)?;
        let solution = self.solution.union(extra);
        let partition = connected_components(self.base, &solution)?;
        let contraction = contract(self.base, &partition)?;
        let mut attrs: Vec<Option<Attrs>> = vec![None; partition.count()];
        for (s, a) in self.attrs.iter().enumerate() {
            let rep = self.contraction.blocks[s][0];
            match &mut attrs[partition.component(rep)] {
                Some(acc) => acc.merge(a),
                slot => *slot = Some(a.clone()),
            }
        }
        let attrs = attrs
            .into_iter()
            .map(|a| a.expect("every new block contains an old block"))
            .collect();
        Ok(ResidualState::assemble(
            self.family,
            self.base,
            solution,
            partition,
            contraction,
            attrs,
        ))
    }
}

/// Whether every member of the family has an edge of `j` leaving it, decided
/// through the components of `(V, j)`. For explicit families the direct
/// per-member crossing check is evaluated too, and disagreement means the
/// family is not disjointness-compliable.
pub fn is_cover(family: &Family, g: &WeightedGraph, j: &EdgeSet) -> Result<bool> {
    check_sizes(family, g)?;
    let by_components = residual(family, g, j)?.core_count() == 0;
    if let FamilySpec::Explicit(f) = family.spec() {
        let direct = crosses_all(f.members(), g, j);
        if direct != by_components {
            return Err(Error::NotDisjointnessCompliable(format!(
                "component check says {by_components}, member crossing check says {direct}"
            )));
        }
    }
    Ok(by_components)
}

pub(crate) fn crosses_all(members: &[u32], g: &WeightedGraph, j: &EdgeSet) -> bool {
    members.iter().all(|&m| {
        j.iter().any(|e| {
            let edge = g.edge(e);
            (m >> edge.u & 1) != (m >> edge.v & 1)
        })
    })
}

/// Fast cover test for known-valid inputs: every component of `(V, j)` is a
/// non-member. `proper_view` switches to the symmetric form of the family.
pub(crate) fn components_feasible(
    family: &Family,
    g: &WeightedGraph,
    j: &[usize],
    proper_view: bool,
) -> bool {
    let n = g.node_count();
    let mut uf = UnionFind::new(n);
    for &e in j {
        let edge = g.edge(e);
        uf.union(edge.u, edge.v);
    }
    let mut merged: Vec<Option<Attrs>> = vec![None; n];
    for v in 0..n {
        let r = uf.find(v);
        match &mut merged[r] {
            Some(acc) => acc.merge(family.node_attrs(v)),
            slot => *slot = Some(family.node_attrs(v).clone()),
        }
    }
    merged.iter().flatten().all(|a| {
        if proper_view {
            !family.violates_proper(a)
        } else {
            !family.violates(a)
        }
    })
}
