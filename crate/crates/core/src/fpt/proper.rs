//! Exact subset DP for proper families.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::fpt::steiner::SteinerTable;
use crate::graph::{spanning_forest, Cost, EdgeSet, NodeId, WeightedGraph};

/// Membership of terminal subsets, cached per mask.
pub(crate) struct MaskMembership<'f> {
    family: &'f Family,
    terminals: Vec<NodeId>,
    proper_view: bool,
    cache: Vec<u8>,
}

impl<'f> MaskMembership<'f> {
    pub(crate) fn new(family: &'f Family, terminals: &[NodeId], proper_view: bool) -> Self {
        Self {
            family,
            terminals: terminals.to_vec(),
            proper_view,
            cache: vec![0; 1 << terminals.len()],
        }
    }

    pub(crate) fn contains(&mut self, mask: u32) -> bool {
        let slot = &mut self.cache[mask as usize];
        if *slot == 0 {
            let nodes: Vec<NodeId> = (0..self.terminals.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.terminals[i])
                .collect();
            let a = self.family.attrs_of(&nodes);
            let member = if self.proper_view {
                self.family.violates_proper(&a)
            } else {
                self.family.violates(&a)
            };
            *slot = if member { 2 } else { 1 };
        }
        *slot == 2
    }
}

/// Optimal cover of a proper family.
///
/// Terminals are the singleton members of the symmetric form. A solution
/// splits into trees whose terminal sets are non-members, so
/// `opt(U) = min(smt(U) if U ∉ F, min over S ∌ F, 2 <= |S| <= |U|-2 of
/// smt(S) + opt(U \ S))`, where `smt(S)` may not use terminals outside `S`.
pub fn fpt_proper_solve(family: &Family, g: &WeightedGraph) -> Result<Option<EdgeSet>> {
    if family.node_count() != g.node_count() {
        return Err(Error::input("family and graph sizes differ"));
    }
    if !family.is_known_proper() {
        return Err(Error::NotProper(format!(
            "{} family is not accepted by the proper solver",
            family.spec().kind()
        )));
    }
    let terminals = family.proper_terminals();
    let mut table = SteinerTable::new(g, &terminals, vec![false; g.node_count()], true)?;
    let mut member = MaskMembership::new(family, &terminals, true);
    let Some(components) = proper_dp(&mut table, &mut member) else {
        return Ok(None);
    };
    let mut edges = EdgeSet::empty();
    for s in components {
        edges = edges.union(&table.tree(s));
    }
    Ok(Some(spanning_forest(g, &edges)))
}

/// Terminal sets of an optimal decomposition, or `None` when infeasible.
pub(crate) fn proper_dp(
    table: &mut SteinerTable<'_>,
    member: &mut MaskMembership<'_>,
) -> Option<Vec<u32>> {
    let full = table.full_mask();
    let size = full as usize + 1;
    let mut opt: Vec<Option<Cost>> = vec![None; size];
    let mut choice = vec![0u32; size];
    opt[0] = Some(0);
    for u in 1..=full {
        let k = u.count_ones();
        let mut best: Option<Cost> = None;
        let mut pick = u;
        if !member.contains(u) {
            best = table.smt(u);
        }
        if k >= 4 {
            let low = u & u.wrapping_neg();
            let rest = u ^ low;
            let mut subs = Vec::new();
            let mut r = (rest - 1) & rest;
            while r != 0 {
                let s = low | r;
                let ks = s.count_ones();
                if ks >= 2 && ks + 2 <= k {
                    subs.push(s);
                }
                r = (r - 1) & rest;
            }
            subs.sort_unstable();
            for s in subs {
                let Some(tail) = opt[(u ^ s) as usize] else {
                    continue;
                };
                if best.is_some_and(|b| tail >= b) || member.contains(s) {
                    continue;
                }
                if let Some(head) = table.smt(s) {
                    if best.is_none_or(|b| head + tail < b) {
                        best = Some(head + tail);
                        pick = s;
                    }
                }
            }
        }
        opt[u as usize] = best;
        choice[u as usize] = pick;
    }
    opt[full as usize]?;
    let mut parts = Vec::new();
    let mut u = full;
    while u != 0 {
        let s = choice[u as usize];
        parts.push(s);
        u ^= s;
    }
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;

    #[test]
    fn two_pairs_on_a_path() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 10), (2, 3, 1)]).unwrap();
        let f = Family::new(
            FamilySpec::SteinerForest {
                parts: vec![vec![0, 1], vec![2, 3]],
            },
            4,
        )
        .unwrap();
        let j = fpt_proper_solve(&f, &g).unwrap().unwrap();
        assert_eq!(j, EdgeSet::new(vec![0, 2]));
    }

    #[test]
    fn zero_sum_gp2p_path() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
        let f = Family::new(FamilySpec::Gp2p { charges: vec![-1, 0, 1] }, 3).unwrap();
        let j = fpt_proper_solve(&f, &g).unwrap().unwrap();
        assert_eq!(g.cost_of(&j), 3);
    }

    #[test]
    fn rejects_non_proper() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
        let f = Family::new(FamilySpec::Gp2p { charges: vec![-1, 0, 2] }, 3).unwrap();
        assert!(matches!(fpt_proper_solve(&f, &g), Err(Error::NotProper(_))));
    }

    #[test]
    fn infeasible_and_empty() {
        let g = WeightedGraph::new(2);
        let f = Family::new(FamilySpec::Gp2p { charges: vec![-1, 1] }, 2).unwrap();
        assert_eq!(fpt_proper_solve(&f, &g).unwrap(), None);
        let f = Family::new(FamilySpec::Gp2p { charges: vec![0, 0] }, 2).unwrap();
        assert_eq!(fpt_proper_solve(&f, &g).unwrap(), Some(EdgeSet::empty()));
    }
}
