mod common;

use common::*;
use famcover::*;
use proptest::prelude::*;

/// Random tree on `n` nodes with a random terminal set of size >= 2.
fn arb_tree() -> impl Strategy<Value = (usize, RawEdges, Vec<NodeId>)> {
    (2usize..=40).prop_flat_map(|n| {
        let parents = prop::collection::vec(any::<prop::sample::Index>(), n - 1);
        let terms = prop::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n);
        (Just(n), parents, terms).prop_map(|(n, parents, terms)| {
            let edges = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p.index(i + 1), i + 1, 1))
                .collect();
            (n, edges, terms)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decomposition_partitions_terminals_into_disjoint_spiders((n, edges, terms) in arb_tree()) {
        let g = build(n, &edges);
        let spiders = kr_decompose(&g, &all_edges(&g), &terms).unwrap();
        let mut owner = vec![None; n];
        let mut seen_terms = Vec::new();
        for (i, s) in spiders.iter().enumerate() {
            prop_assert!(s.is_valid(&g, &terms), "spider {:?}", s);
            prop_assert!(s.terminals.len() >= 2);
            for v in s.nodes(&g) {
                prop_assert!(owner[v].is_none(), "node {} in two spiders", v);
                owner[v] = Some(i);
            }
            for e in s.edges.iter() {
                prop_assert!(e < g.edge_count());
            }
            seen_terms.extend_from_slice(&s.terminals);
        }
        seen_terms.sort_unstable();
        prop_assert_eq!(seen_terms, terms);
    }
}

/// Exhaustive minimum of `sum of leg lengths / (p - 1)` over every center
/// and every set of at least two reachable cores.
fn brute_min_density(state: &ResidualState<'_>) -> Option<Density> {
    let h = state.contracted();
    let d = floyd(h);
    let cores = state.cores();
    let mut best: Option<Density> = None;
    for center in 0..h.node_count() {
        for mask in 1u32..(1 << cores.len()) {
            if mask.count_ones() < 2 {
                continue;
            }
            let mut cost = 0;
            let mut ok = true;
            for (i, &c) in cores.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    match d[center][c] {
                        Some(x) => cost += x,
                        None => ok = false,
                    }
                }
            }
            if ok {
                let dens = Density::new(cost, (mask.count_ones() - 1) as u64);
                if best.is_none_or(|b| dens < b) {
                    best = Some(dens);
                }
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn min_density_spider_is_exhaustively_minimal(
        (n, edges, charges) in arb_graph(6, 10).prop_flat_map(|(n, edges)| {
            (Just(n), Just(edges), prop::collection::vec(-1i64..=1, n))
        })
    ) {
        let g = build(n, &edges);
        let family = Family::new(FamilySpec::Gp2p { charges }, n).unwrap();
        let state = residual(&family, &g, &EdgeSet::empty()).unwrap();
        prop_assume!(state.core_count() >= 2);
        let got = min_density_spider(&state).unwrap();
        let brute = brute_min_density(&state);
        prop_assert_eq!(got.as_ref().map(|c| c.estimated_density), brute);
        if let Some(c) = got {
            let p = c.chosen_cores.len();
            prop_assert!(p >= 2);
            prop_assert!(g.cost_of(&c.edges) <= c.estimated_cost);
            prop_assert_eq!(c.estimated_density, Density::new(c.estimated_cost, (p - 1) as u64));
            let delta = state.core_count() - state.cores_after(&c.edges).unwrap();
            prop_assert!(delta >= p - 1);
            // every chosen core ends up in one component
            let after = state.absorb(&c.edges).unwrap();
            let first = after.block_of(state.blocks()[c.chosen_cores[0]][0]);
            for &core in &c.chosen_cores {
                prop_assert_eq!(after.block_of(state.blocks()[core][0]), first);
            }
        }
    }
}

#[test]
fn decomposition_examples() {
    let path = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
    let s = kr_decompose(&path, &all_edges(&path), &[0, 2]).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].terminals, vec![0, 2]);
    let star = WeightedGraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
    let s = kr_decompose(&star, &all_edges(&star), &[1, 2, 3]).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].root, 0);
}
