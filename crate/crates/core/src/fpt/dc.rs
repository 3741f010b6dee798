//! Subset DP for disjointness-compliable families that need not be
//! symmetric.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::fpt::steiner::SteinerTable;
use crate::graph::{Cost, EdgeSet, NodeId, WeightedGraph};
use crate::greedy::{continue_greedy, require_dc, SolveResult, SolverConfig};
use crate::oracles::{prune_minimal, RestrictedCoverOracle};
use crate::residual::{is_cover, residual};

/// Largest core count accepted by [`fpt_dc_solve`].
pub const MAX_DC_CORES: usize = 18;

/// Subset DP over the cores where a block `S` costs a Steiner tree on `S`
/// plus, when the contracted tree is still a core, the oracle's restricted
/// cover of it. With an `alpha`-approximate oracle the result is within
/// `alpha + 1` of optimal.
///
/// Blocks computed independently may share non-core nodes, which can merge
/// them into a component that violates again; the union is then completed
/// by the greedy loop before the final pruning.
pub fn fpt_dc_solve(
    family: &Family,
    g: &WeightedGraph,
    oracle: &dyn RestrictedCoverOracle,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    require_dc(family)?;
    if family.node_count() != g.node_count() {
        return Err(Error::input("family and graph sizes differ"));
    }
    let terminals = family.singleton_cores();
    let tau = terminals.len();
    if tau > MAX_DC_CORES {
        return Err(Error::cap("cores", MAX_DC_CORES, tau));
    }
    let alpha = cfg.alpha.max(oracle.alpha());
    let bound = alpha + 1.0;
    let mut table = SteinerTable::new(g, &terminals, vec![false; g.node_count()], true)?;
    let mut blocks = BlockCosts {
        family,
        g,
        oracle,
        memo: HashMap::new(),
    };

    let full = table.full_mask();
    let size = full as usize + 1;
    let mut opt: Vec<Option<Cost>> = vec![None; size];
    let mut choice = vec![0u32; size];
    opt[0] = Some(0);
    for u in 1..=full {
        let low = u & u.wrapping_neg();
        let rest = u ^ low;
        let mut subs = Vec::new();
        let mut r = rest;
        loop {
            subs.push(low | r);
            if r == 0 {
                break;
            }
            r = (r - 1) & rest;
        }
        subs.sort_unstable();
        let mut best: Option<Cost> = None;
        for s in subs {
            let Some(tail) = opt[(u ^ s) as usize] else {
                continue;
            };
            if best.is_some_and(|b| tail >= b) {
                continue;
            }
            if let Some((head, _)) = blocks.get(&mut table, s)? {
                if best.is_none_or(|b| head + tail < b) {
                    best = Some(head + tail);
                    choice[u as usize] = s;
                }
            }
        }
        opt[u as usize] = best;
    }

    if opt[full as usize].is_none() {
        let blocked = (0..tau)
            .find(|&i| {
                !blocks
                    .memo
                    .iter()
                    .any(|(&s, v)| s >> i & 1 == 1 && v.is_some())
            })
            .unwrap_or(0);
        return Ok(SolveResult {
            edges: EdgeSet::empty(),
            cost: 0,
            iterations: Vec::new(),
            feasible: false,
            witness: Some(vec![terminals[blocked]]),
            tau0: tau,
            bound,
        });
    }
    let mut union = EdgeSet::empty();
    let mut u = full;
    while u != 0 {
        let s = choice[u as usize];
        let (_, edges) = blocks.get(&mut table, s)?.expect("chosen blocks are finite");
        union = union.union(&edges);
        u ^= s;
    }
    let mut result = if is_cover(family, g, &union)? {
        let edges = prune_minimal(family, g, &union)?;
        SolveResult {
            cost: g.cost_of(&edges),
            edges,
            iterations: Vec::new(),
            feasible: true,
            witness: None,
            tau0: tau,
            bound,
        }
    } else {
        continue_greedy(residual(family, g, &union)?, oracle, cfg)?
    };
    result.tau0 = tau;
    result.bound = bound;
    Ok(result)
}

struct BlockCosts<'a> {
    family: &'a Family,
    g: &'a WeightedGraph,
    oracle: &'a dyn RestrictedCoverOracle,
    memo: HashMap<u32, Option<(Cost, EdgeSet)>>,
}

impl BlockCosts<'_> {
    fn get(&mut self, table: &mut SteinerTable<'_>, s: u32) -> Result<Option<(Cost, EdgeSet)>> {
        if let Some(v) = self.memo.get(&s) {
            return Ok(v.clone());
        }
        let value = self.compute(table, s)?;
        self.memo.insert(s, value.clone());
        Ok(value)
    }

    fn compute(&self, table: &mut SteinerTable<'_>, s: u32) -> Result<Option<(Cost, EdgeSet)>> {
        if table.smt(s).is_none() {
            return Ok(None);
        }
        let tree = table.tree(s);
        let anchor: NodeId = table.terminals()[s.trailing_zeros() as usize];
        let state = residual(self.family, self.g, &tree)?;
        let v = state.block_of(anchor);
        let edges = if state.is_core(v) {
            match self.oracle.restricted_cover(&state, v)? {
                Some(cover) => tree.union(&cover),
                None => return Ok(None),
            }
        } else {
            tree
        };
        Ok(Some((self.g.cost_of(&edges), edges)))
    }
}
