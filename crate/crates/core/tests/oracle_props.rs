mod common;

use common::*;
use famcover::*;
use proptest::prelude::*;

fn arb_gp2p() -> impl Strategy<Value = (usize, RawEdges, Vec<i64>, u32)> {
    arb_graph(8, 14).prop_flat_map(|(n, edges)| {
        (Just(n), Just(edges), prop::collection::vec(-2i64..=2, n), any::<u32>())
    })
}

/// Brute-force optimum of the halo sub-instance of `core`: the contracted
/// graph without the other cores, plus one isolated node so that every
/// violating kept set is a proper subset of the ground set.
fn halo_brute_force(state: &ResidualState<'_>, core: NodeId) -> Option<Cost> {
    let h = state.contracted();
    let keep: Vec<NodeId> = (0..h.node_count())
        .filter(|&v| v == core || !state.is_core(v))
        .collect();
    let index = |v: NodeId| keep.iter().position(|&k| k == v);
    let ground = keep.len() + 1;
    let mut sub = WeightedGraph::new(ground);
    for e in h.edges() {
        if let (Some(a), Some(b)) = (index(e.u), index(e.v)) {
            sub.add_edge(a, b, e.cost).unwrap();
        }
    }
    let family = state.family();
    let mut members = Vec::new();
    for mask in 1u32..(1 << keep.len()) {
        let picked: Vec<NodeId> = (0..keep.len()).filter(|&i| mask >> i & 1 == 1).map(|i| keep[i]).collect();
        let mut attrs = state.attrs(picked[0]).clone();
        for &v in &picked[1..] {
            attrs.merge(state.attrs(v));
        }
        if family.violates(&attrs) {
            members.push(mask);
        }
    }
    let explicit = ExplicitFamily::from_masks(ground, members).unwrap();
    let f = Family::new(FamilySpec::Explicit(explicit), ground).unwrap();
    brute_force_cover(&f, &sub, &OracleCaps::default())
        .unwrap()
        .map(|j| sub.cost_of(&j))
}

/// Closes random seeds under complement and the disjointness rule.
fn proper_closure(ground: usize, seeds: Vec<u32>) -> ExplicitFamily {
    let full = (1u32 << ground) - 1;
    let mut members: Vec<u32> = seeds.into_iter().map(|m| m & full).filter(|&m| m != 0 && m != full).collect();
    loop {
        let f = ExplicitFamily::from_masks(ground, members.clone()).unwrap();
        let before = f.members().len();
        for &a in f.members() {
            if !f.contains_mask(full & !a) {
                members.push(full & !a);
            }
            let mut sub = (a - 1) & a;
            while sub != 0 {
                if !f.contains_mask(sub) && !f.contains_mask(a & !sub) {
                    members.push(sub);
                }
                sub = (sub - 1) & a;
            }
        }
        members.sort_unstable();
        members.dedup();
        if members.len() == before {
            return ExplicitFamily::from_masks(ground, members).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn restricted_cover_is_the_halo_optimum((n, edges, charges, pick) in arb_gp2p()) {
        let g = build(n, &edges);
        let family = Family::new(FamilySpec::Gp2p { charges }, n).unwrap();
        let j: EdgeSet = (0..g.edge_count()).filter(|&e| pick >> e & 1 == 1).collect();
        let state = residual(&family, &g, &j).unwrap();
        for &core in state.cores() {
            let got = exact_restricted_cover(&state, core, &OracleCaps::default()).unwrap();
            prop_assert_eq!(got.as_ref().map(|s| g.cost_of(s)), halo_brute_force(&state, core));
            if let Some(s) = got {
                // avoids other cores and eliminates at least one core
                for e in s.iter() {
                    let edge = g.edge(e);
                    for x in [state.block_of(edge.u), state.block_of(edge.v)] {
                        prop_assert!(x == core || !state.is_core(x));
                    }
                }
                prop_assert!(state.cores_after(&s).unwrap() < state.core_count());
                let after = state.absorb(&s).unwrap();
                prop_assert!(!after.is_core(after.block_of(state.blocks()[core][0])));
            }
        }
    }

    #[test]
    fn growth_oracle_covers_when_the_exact_one_does((n, edges, charges, pick) in arb_gp2p()) {
        let g = build(n, &edges);
        let family = Family::new(FamilySpec::Gp2p { charges }, n).unwrap();
        let j: EdgeSet = (0..g.edge_count()).filter(|&e| pick >> e & 1 == 1).collect();
        let state = residual(&family, &g, &j).unwrap();
        for &core in state.cores() {
            let exact = exact_restricted_cover(&state, core, &OracleCaps::default()).unwrap();
            let grown = GrowthOracle.restricted_cover(&state, core).unwrap();
            prop_assert_eq!(exact.is_some(), grown.is_some());
            if let (Some(a), Some(b)) = (exact, grown) {
                prop_assert!(g.cost_of(&a) <= g.cost_of(&b));
                prop_assert!(state.cores_after(&b).unwrap() < state.core_count());
            }
        }
    }

    #[test]
    fn pruned_covers_are_forests_with_terminal_leaves(
        (n, edges, seeds) in arb_connected(7, 12).prop_flat_map(|(n, edges)| {
            let full = (1u32 << n) - 1;
            (Just(n), Just(edges), prop::collection::vec(1..full, 0..4))
        })
    ) {
        let g = build(n, &edges);
        let explicit = proper_closure(n, seeds);
        prop_assert!(explicit.is_proper());
        let terminal: Vec<bool> = (0..n).map(|v| explicit.contains_mask(1 << v)).collect();
        let family = Family::new(FamilySpec::Explicit(explicit), n).unwrap();
        let all = all_edges(&g);
        prop_assert!(is_cover(&family, &g, &all).unwrap());
        let pruned = prune_minimal(&family, &g, &all).unwrap();
        prop_assert!(is_cover(&family, &g, &pruned).unwrap());
        prop_assert!(is_forest(&g, &pruned).unwrap());
        let mut degree = vec![0; n];
        for e in pruned.iter() {
            degree[g.edge(e).u] += 1;
            degree[g.edge(e).v] += 1;
        }
        for v in 0..n {
            if degree[v] == 1 {
                prop_assert!(terminal[v], "leaf {} is not a terminal", v);
            }
        }
        // inclusion-minimal
        for e in pruned.iter() {
            let less: EdgeSet = pruned.iter().filter(|&x| x != e).collect();
            prop_assert!(!is_cover(&family, &g, &less).unwrap());
        }
        prop_assert_eq!(prune_minimal(&family, &g, &pruned).unwrap(), pruned);
    }

    #[test]
    fn brute_force_is_a_minimum_cover((n, edges, charges) in arb_graph(6, 9).prop_flat_map(|(n, edges)| {
        (Just(n), Just(edges), prop::collection::vec(-2i64..=2, n))
    })) {
        let g = build(n, &edges);
        let family = Family::new(FamilySpec::Gp2p { charges }, n).unwrap();
        let got = brute_force_cover(&family, &g, &OracleCaps::default()).unwrap();
        // independent scan over every edge subset
        let mut best: Option<Cost> = None;
        for pick in 0u32..(1 << g.edge_count()) {
            let j: EdgeSet = (0..g.edge_count()).filter(|&e| pick >> e & 1 == 1).collect();
            if is_cover(&family, &g, &j).unwrap() {
                let c = g.cost_of(&j);
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        prop_assert_eq!(got.as_ref().map(|j| g.cost_of(j)), best);
        if let Some(j) = got {
            prop_assert!(is_forest(&g, &j).unwrap());
        }
    }
}

#[test]
fn oracle_examples() {
    let path = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
    let f = Family::new(FamilySpec::Gp2p { charges: vec![-1, 0, 1] }, 3).unwrap();
    let caps = OracleCaps::default();
    let j = brute_force_cover(&f, &path, &caps).unwrap().unwrap();
    assert_eq!(path.cost_of(&j), 3);
    let empty = Family::new(FamilySpec::Explicit(ExplicitFamily::new(3, &[]).unwrap()), 3).unwrap();
    assert_eq!(brute_force_cover(&empty, &path, &caps).unwrap(), Some(EdgeSet::empty()));
    let bare = WeightedGraph::new(2);
    let pair = Family::new(FamilySpec::Gp2p { charges: vec![-1, 1] }, 2).unwrap();
    assert_eq!(brute_force_cover(&pair, &bare, &caps).unwrap(), None);
    let st = residual(&pair, &bare, &EdgeSet::empty()).unwrap();
    assert_eq!(exact_restricted_cover(&st, 0, &caps).unwrap(), None);

    let tri = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 5)]).unwrap();
    let sf = Family::new(FamilySpec::SteinerForest { parts: vec![vec![0, 2]] }, 3).unwrap();
    assert_eq!(prune_minimal(&sf, &tri, &all_edges(&tri)).unwrap(), EdgeSet::new(vec![0, 1]));
    assert_eq!(prune_minimal(&empty, &tri, &all_edges(&tri)).unwrap(), EdgeSet::empty());
    assert!(prune_minimal(&sf, &tri, &EdgeSet::new(vec![0])).is_err());
}
