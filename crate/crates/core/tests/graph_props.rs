mod common;

use common::*;
use famcover::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mst_is_a_spanning_tree_of_w((n, edges) in arb_graph(7, 12), mask in 1u32..128) {
        let g = build(n, &edges);
        let mask = mask & ((1 << n) - 1);
        prop_assume!(mask != 0);
        let w = mask_nodes(mask, n);
        let tree = mst_induced(&g, &w).unwrap();
        match (tree, brute_tree_cost(&g, mask)) {
            (None, None) => {}
            (Some(t), Some(c)) => {
                prop_assert_eq!(g.cost_of(&t), c);
                prop_assert!(is_forest(&g, &t).unwrap());
                prop_assert_eq!(t.len() + 1, w.len());
                for e in t.iter() {
                    prop_assert!(w.contains(&g.edge(e).u) && w.contains(&g.edge(e).v));
                }
                let p = connected_components(&g, &t).unwrap();
                prop_assert!(w.iter().all(|&v| p.component(v) == p.component(w[0])));
            }
            (t, c) => prop_assert!(false, "mst {:?} vs brute {:?}", t, c),
        }
    }

    #[test]
    fn contraction_blocks_are_the_partition((n, edges) in arb_graph(8, 12), pick in any::<u32>()) {
        let g = build(n, &edges);
        let j: EdgeSet = (0..g.edge_count()).filter(|&e| pick >> (e % 32) & 1 == 1).collect();
        let p = connected_components(&g, &j).unwrap();
        let c = contract(&g, &p).unwrap();
        prop_assert_eq!(c.blocks.clone(), p.blocks());
        prop_assert_eq!(c.graph.node_count(), p.count());
        for (id, e) in c.graph.edges().iter().enumerate() {
            let base = g.edge(c.origin[id]);
            prop_assert_eq!(base.cost, e.cost);
            let (a, b) = (p.component(base.u), p.component(base.v));
            prop_assert!((a, b) == (e.u, e.v) || (b, a) == (e.u, e.v));
            // cheapest among all parallel base edges
            let cheapest = g.edges().iter().filter(|x| {
                let (xa, xb) = (p.component(x.u), p.component(x.v));
                (xa, xb) == (a, b) || (xb, xa) == (a, b)
            }).map(|x| x.cost).min().unwrap();
            prop_assert_eq!(e.cost, cheapest);
        }
        // component ids are ordered by smallest member
        let firsts: Vec<NodeId> = c.blocks.iter().map(|b| b[0]).collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shortest_paths_are_exact((n, edges) in arb_graph(8, 14), src in 0usize..8, forb in any::<u8>()) {
        let g = build(n, &edges);
        let src = src % n;
        let forbidden: Vec<NodeId> = (0..n).filter(|&v| v != src && forb >> v & 1 == 1).collect();
        let sp = shortest_paths(&g, src, &forbidden).unwrap();
        // brute force on the graph without forbidden nodes
        let keep: Vec<(usize, usize, Cost)> = edges.iter().copied()
            .filter(|(u, v, _)| !forbidden.contains(u) && !forbidden.contains(v)).collect();
        let d = floyd(&build(n, &keep));
        for v in 0..n {
            let expect = if forbidden.contains(&v) { None } else { d[src][v] };
            prop_assert_eq!(sp.dist[v], expect);
            if let Some(path) = sp.path_to(&g, v) {
                let c: Cost = path.iter().map(|&e| g.edge(e).cost).sum();
                prop_assert_eq!(Some(c), sp.dist[v]);
            }
        }
        for e in g.edges() {
            if forbidden.contains(&e.u) || forbidden.contains(&e.v) { continue; }
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if let (Some(dx), Some(dy)) = (sp.dist[x], sp.dist[y]) {
                    prop_assert!(dx <= dy + e.cost);
                }
            }
        }
    }

    #[test]
    fn steiner_tree_matches_brute_force((n, edges) in arb_graph(7, 12), tmask in 1u32..128, fmask in any::<u8>()) {
        let g = build(n, &edges);
        let full = (1u32 << n) - 1;
        let tmask = tmask & full;
        prop_assume!(tmask != 0);
        let fmask = fmask as u32 & full & !tmask;
        let terms = mask_nodes(tmask, n);
        let forbidden = mask_nodes(fmask, n);
        let got = steiner_tree_exact(&g, &terms, &forbidden).unwrap();
        let mut best: Option<Cost> = None;
        for w in 1..=full {
            if w & tmask != tmask || w & fmask != 0 { continue; }
            if let Some(c) = brute_tree_cost(&g, w) {
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        match got {
            None => prop_assert_eq!(best, None),
            Some(t) => {
                prop_assert_eq!(Some(g.cost_of(&t)), best);
                let p = connected_components(&g, &t).unwrap();
                prop_assert!(terms.iter().all(|&v| p.component(v) == p.component(terms[0])));
                for e in t.iter() {
                    prop_assert!(!forbidden.contains(&g.edge(e).u) && !forbidden.contains(&g.edge(e).v));
                }
            }
        }
    }
}

#[test]
fn graph_examples() {
    let path = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
    assert_eq!(connected_components(&path, &EdgeSet::empty()).unwrap().count(), 3);
    let sp = shortest_paths(&path, 0, &[1]).unwrap();
    assert_eq!(sp.dist[2], None);
    let cycle =
        WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 5)]).unwrap();
    let sp = shortest_paths(&cycle, 0, &[]).unwrap();
    assert_eq!(sp.dist[2], Some(2));
    assert_eq!(sp.path_to(&cycle, 2), Some(vec![0, 1]));
    let t = mst_induced(&cycle, &[0, 1, 2, 3]).unwrap().unwrap();
    assert_eq!(cycle.cost_of(&t), 3);
    assert!(!t.contains(3));
}
