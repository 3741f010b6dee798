//! Subset DPs for Steiner forest and red/blue point-to-point connection.

use crate::error::{Error, Result};
use crate::fpt::steiner::SteinerTable;
use crate::graph::{spanning_forest, Cost, EdgeSet, NodeId, WeightedGraph};

/// Largest number of parts accepted by [`steiner_forest_fpt`].
pub const MAX_PARTS: usize = 16;
/// Largest red set accepted by [`gp2p_redblue_solve`].
pub const MAX_RED: usize = 18;

/// Optimal Steiner forest by DP over subsets of parts:
/// `opt(I) = min over ∅ ≠ I' ⊆ I of smt(∪_{i ∈ I'} T_i) + opt(I \ I')`.
/// Parts may overlap.
pub fn steiner_forest_fpt(parts: &[Vec<NodeId>], g: &WeightedGraph) -> Result<Option<EdgeSet>> {
    let n = g.node_count();
    if parts.len() > MAX_PARTS {
        return Err(Error::cap("parts", MAX_PARTS, parts.len()));
    }
    let mut terminals: Vec<NodeId> = parts.iter().flatten().copied().collect();
    if let Some(&v) = terminals.iter().find(|&&v| v >= n) {
        return Err(Error::input(format!("part node {v} out of range")));
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::input("steiner forest parts must be non-empty"));
    }
    terminals.sort_unstable();
    terminals.dedup();
    let mut table = SteinerTable::new(g, &terminals, vec![false; n], false)?;
    let part_masks: Vec<u32> = parts
        .iter()
        .map(|p| {
            p.iter().fold(0u32, |m, v| {
                m | 1 << terminals.binary_search(v).expect("part nodes are terminals")
            })
        })
        .collect();

    let full = ((1u64 << parts.len()) - 1) as u32;
    let size = full as usize + 1;
    let mut opt: Vec<Option<Cost>> = vec![None; size];
    let mut choice = vec![0u32; size];
    opt[0] = Some(0);
    let terminal_mask = |ids: u32| {
        (0..parts.len())
            .filter(|&i| ids >> i & 1 == 1)
            .fold(0u32, |m, i| m | part_masks[i])
    };
    for set in 1..=full {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
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
            let Some(tail) = opt[(set ^ s) as usize] else {
                continue;
            };
            if best.is_some_and(|b| tail >= b) {
                continue;
            }
            if let Some(head) = table.smt(terminal_mask(s)) {
                if best.is_none_or(|b| head + tail < b) {
                    best = Some(head + tail);
                    choice[set as usize] = s;
                }
            }
        }
        opt[set as usize] = best;
    }
    if opt[full as usize].is_none() {
        return Ok(None);
    }
    let mut edges = EdgeSet::empty();
    let mut set = full;
    while set != 0 {
        let s = choice[set as usize];
        edges = edges.union(&table.tree(terminal_mask(s)));
        set ^= s;
    }
    Ok(Some(spanning_forest(g, &edges)))
}

/// Optimal solution of point-to-point connection with charge −1 on `red`,
/// a large positive charge on `blue` and 0 elsewhere: every component with
/// a red node needs a blue node. DP over red subsets, each block paying
/// `min over blue b of smt(S ∪ {b})` in the graph without the other reds.
pub fn gp2p_redblue_solve(
    g: &WeightedGraph,
    red: &[NodeId],
    blue: &[NodeId],
) -> Result<Option<EdgeSet>> {
    let n = g.node_count();
    let mut red = red.to_vec();
    red.sort_unstable();
    red.dedup();
    let mut blue = blue.to_vec();
    blue.sort_unstable();
    blue.dedup();
    if let Some(&v) = red.iter().chain(&blue).find(|&&v| v >= n) {
        return Err(Error::input(format!("node {v} out of range")));
    }
    if let Some(v) = red.iter().find(|v| blue.binary_search(v).is_ok()) {
        return Err(Error::input(format!("node {v} is both red and blue")));
    }
    if red.len() > MAX_RED {
        return Err(Error::cap("red nodes", MAX_RED, red.len()));
    }
    let mut table = SteinerTable::new(g, &red, vec![false; n], true)?;
    let block = |table: &mut SteinerTable<'_>, s: u32| -> Option<(Cost, NodeId)> {
        blue.iter()
            .filter_map(|&b| table.value(s, b).map(|c| (c, b)))
            .min()
    };

    let full = table.full_mask();
    let size = full as usize + 1;
    let mut opt: Vec<Option<Cost>> = vec![None; size];
    let mut choice = vec![(0u32, 0usize); size];
    opt[0] = Some(0);
    for set in 1..=full {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
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
            let Some(tail) = opt[(set ^ s) as usize] else {
                continue;
            };
            if best.is_some_and(|b| tail >= b) {
                continue;
            }
            if let Some((head, b)) = block(&mut table, s) {
                if best.is_none_or(|x| head + tail < x) {
                    best = Some(head + tail);
                    choice[set as usize] = (s, b);
                }
            }
        }
        opt[set as usize] = best;
    }
    if opt[full as usize].is_none() {
        return Ok(None);
    }
    let mut edges = EdgeSet::empty();
    let mut set = full;
    while set != 0 {
        let (s, b) = choice[set as usize];
        edges = edges.union(&table.tree_at(s, b));
        set ^= s;
    }
    Ok(Some(spanning_forest(g, &edges)))
}
