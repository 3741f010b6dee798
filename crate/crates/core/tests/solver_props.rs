mod common;

use common::*;
use famcover::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn caps() -> OracleCaps {
    OracleCaps::default()
}

fn opt(family: &Family, g: &WeightedGraph) -> Option<Cost> {
    brute_force_cover(family, g, &caps()).unwrap().map(|j| g.cost_of(&j))
}

fn gp2p(charges: Vec<i64>) -> Family {
    let n = charges.len();
    Family::new(FamilySpec::Gp2p { charges }, n).unwrap()
}

fn arb_charges(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, n)
}

fn arb_zero_sum(n: usize) -> impl Strategy<Value = Vec<i64>> {
    arb_charges(n).prop_map(|mut c| {
        let s: i64 = c.iter().sum();
        c[0] -= s;
        c
    })
}

fn arb_positive_sum(n: usize) -> impl Strategy<Value = Vec<i64>> {
    arb_charges(n).prop_map(|mut c| {
        let s: i64 = c.iter().sum();
        if s <= 0 {
            c[0] += 1 - s;
        }
        c
    })
}

fn arb_parts(n: usize) -> impl Strategy<Value = Vec<Vec<NodeId>>> {
    (Just(n), any::<prop::sample::Index>(), prop::collection::vec(any::<prop::sample::Index>(), n)).prop_map(
        |(n, count, keys)| {
            let mut order: Vec<NodeId> = (0..n).collect();
            order.sort_by_key(|&v| keys[v].index(1000));
            let parts = 1 + count.index((n / 2).max(1));
            (0..parts)
                .map(|i| {
                    let mut p = order[2 * i..2 * i + 2].to_vec();
                    p.sort_unstable();
                    p
                })
                .collect()
        },
    )
}

fn arb_mrqt(n: usize) -> impl Strategy<Value = FamilySpec> {
    (
        prop::collection::vec(0i64..=2, n),
        prop::collection::btree_map(0..n, 1i64..=4, 1..=3),
    )
        .prop_map(|(charges, ds)| FamilySpec::MultirootQuotaTree {
            demands: ds.into_iter().map(|(r, k)| (r, charges[r] + k)).collect(),
            charges,
        })
}

fn with<S: Strategy>(
    max_n: usize,
    max_m: usize,
    f: impl Fn(usize) -> S + Clone + 'static,
) -> impl Strategy<Value = (usize, RawEdges, S::Value)> {
    arb_graph(max_n, max_m).prop_flat_map(move |(n, edges)| (Just(n), Just(edges), f(n)))
}

fn check_greedy(family: &Family, g: &WeightedGraph) -> Result<(), TestCaseError> {
    let cfg = SolverConfig::default();
    let res = spider_cover_solve(family, g, &cfg).unwrap();
    let best = opt(family, g);
    prop_assert_eq!(res.feasible, best.is_some());
    prop_assert_eq!(res.cost, g.cost_of(&res.edges));
    prop_assert_eq!(res.bound, ratio_bound(1.0, res.tau0));
    if let Some(o) = best {
        prop_assert!(is_cover(family, g, &res.edges).unwrap());
        prop_assert!(is_forest(g, &res.edges).unwrap());
        prop_assert!(res.cost >= o);
        if res.tau0 <= 1 {
            prop_assert_eq!(res.cost, o);
        } else {
            prop_assert!(res.cost as f64 <= (1.0 + 2.0 * (res.tau0 as f64).ln()) * o as f64 + 1e-9);
        }
    } else {
        prop_assert!(res.witness.is_some());
    }
    let mut nu = res.tau0;
    for it in &res.iterations {
        prop_assert_eq!(it.nu_before, nu);
        prop_assert!(it.nu_after < it.nu_before);
        prop_assert_eq!(it.delta, it.nu_before - it.nu_after);
        nu = it.nu_after;
    }
    prop_assert!(res.iterations.len() <= res.tau0);
    prop_assert_eq!(&spider_cover_solve(family, g, &cfg).unwrap(), &res);
    Ok(())
}

/// Every component's terminal set is a non-member of the symmetric view.
fn check_components(family: &Family, g: &WeightedGraph, j: &EdgeSet) -> Result<(), TestCaseError> {
    let terminals = family.proper_terminals();
    let p = connected_components(g, j).unwrap();
    for block in p.blocks() {
        let s: Vec<NodeId> = block.iter().copied().filter(|v| terminals.contains(v)).collect();
        if !s.is_empty() && s.len() < g.node_count() {
            prop_assert!(!family.contains_proper(&s).unwrap(), "component terminals {:?}", s);
        }
    }
    Ok(())
}

fn check_gw(family: &Family, g: &WeightedGraph) -> Result<(), TestCaseError> {
    let run = gw_run(family, g).unwrap();
    let best = opt(family, g);
    prop_assert_eq!(run.edges.is_some(), best.is_some());
    prop_assert!(run.dual_feasible(g));
    if let (Some(j), Some(o)) = (&run.edges, best) {
        prop_assert!(is_cover(family, g, j).unwrap());
        prop_assert!(is_forest(g, j).unwrap());
        let c = g.cost_of(j);
        prop_assert!(o <= c && c <= 2 * o, "gw {} opt {}", c, o);
        prop_assert!(run.dual_value() <= BigRational::from_integer(o.into()));
        let terminals = family.proper_terminals();
        let mut degree = vec![0; g.node_count()];
        for e in j.iter() {
            degree[g.edge(e).u] += 1;
            degree[g.edge(e).v] += 1;
        }
        for (v, &d) in degree.iter().enumerate() {
            if d == 1 {
                prop_assert!(terminals.contains(&v), "leaf {} is not a terminal", v);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn greedy_on_gp2p((n, edges, charges) in with(8, 12, arb_charges)) {
        check_greedy(&gp2p(charges), &build(n, &edges))?;
    }

    #[test]
    fn greedy_on_multiroot_quota((n, edges, spec) in with(8, 12, arb_mrqt)) {
        check_greedy(&Family::new(spec, n).unwrap(), &build(n, &edges))?;
    }

    #[test]
    fn fpt_proper_is_exact_on_zero_sum_gp2p((n, edges, charges) in with(8, 12, arb_zero_sum)) {
        let g = build(n, &edges);
        let family = gp2p(charges);
        let got = fpt_proper_solve(&family, &g).unwrap();
        prop_assert_eq!(got.as_ref().map(|j| g.cost_of(j)), opt(&family, &g));
        if let Some(j) = got {
            prop_assert!(is_cover(&family, &g, &j).unwrap());
            check_components(&family, &g, &j)?;
        }
    }

    #[test]
    fn fpt_proper_and_forest_dp_are_exact_on_steiner_forest((n, edges, parts) in with(8, 12, arb_parts)) {
        let g = build(n, &edges);
        let family = Family::new(FamilySpec::SteinerForest { parts: parts.clone() }, n).unwrap();
        let best = opt(&family, &g);
        let got = fpt_proper_solve(&family, &g).unwrap();
        prop_assert_eq!(got.as_ref().map(|j| g.cost_of(j)), best);
        if let Some(j) = got {
            prop_assert!(is_cover(&family, &g, &j).unwrap());
            check_components(&family, &g, &j)?;
        }
        let forest = steiner_forest_fpt(&parts, &g).unwrap();
        prop_assert_eq!(forest.as_ref().map(|j| g.cost_of(j)), best);
        if let Some(j) = forest {
            prop_assert!(is_cover(&family, &g, &j).unwrap());
        }
    }

    #[test]
    fn fpt_dc_is_within_twice_optimal((n, edges, charges) in with(8, 12, arb_positive_sum)) {
        let g = build(n, &edges);
        let family = gp2p(charges);
        let res = fpt_dc_solve(&family, &g, &ExactOracle::new(caps()), &SolverConfig::default()).unwrap();
        let best = opt(&family, &g);
        prop_assert_eq!(res.feasible, best.is_some());
        if let Some(o) = best {
            prop_assert!(is_cover(&family, &g, &res.edges).unwrap());
            prop_assert!(o <= res.cost && res.cost <= 2 * o, "fpt-dc {} opt {}", res.cost, o);
        }
    }

    #[test]
    fn redblue_matches_its_gp2p_encoding(
        (n, edges, roles) in with(8, 12, |n| prop::collection::vec(0u8..3, n))
    ) {
        let g = build(n, &edges);
        let red: Vec<NodeId> = (0..n).filter(|&v| roles[v] == 1).collect();
        let blue: Vec<NodeId> = (0..n).filter(|&v| roles[v] == 2).collect();
        let charges: Vec<i64> = roles.iter().map(|&r| match r { 1 => -1, 2 => n as i64, _ => 0 }).collect();
        let family = gp2p(charges);
        let got = gp2p_redblue_solve(&g, &red, &blue).unwrap();
        prop_assert_eq!(got.as_ref().map(|j| g.cost_of(j)), opt(&family, &g));
        if let Some(j) = got {
            prop_assert!(is_cover(&family, &g, &j).unwrap());
        }
    }

    #[test]
    fn gw_on_zero_sum_gp2p((n, edges, charges) in with(8, 12, arb_zero_sum)) {
        check_gw(&gp2p(charges), &build(n, &edges))?;
    }

    #[test]
    fn gw_on_steiner_forest((n, edges, parts) in with(8, 12, arb_parts)) {
        let family = Family::new(FamilySpec::SteinerForest { parts }, n).unwrap();
        check_gw(&family, &build(n, &edges))?;
    }
}

#[test]
fn solver_examples() {
    let cfg = SolverConfig::default();
    let path = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
    let res = spider_cover_solve(&gp2p(vec![-1, 0, 1]), &path, &cfg).unwrap();
    assert_eq!((res.cost, res.iterations.len()), (3, 1));
    assert_eq!(res.iterations[0].kind, CandidateKind::RestrictedCover);

    // u1, u2, p1, p2
    let two = WeightedGraph::from_edges(4, &[(0, 2, 1), (1, 3, 1), (0, 1, 10)]).unwrap();
    let f = gp2p(vec![-1, -1, 1, 1]);
    let res = spider_cover_solve(&f, &two, &cfg).unwrap();
    assert_eq!((res.cost, res.iterations.len()), (2, 2));
    let res = fpt_dc_solve(&f, &two, &ExactOracle::new(caps()), &cfg).unwrap();
    assert_eq!(res.cost, 2);

    let p = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
    let res = fpt_dc_solve(&gp2p(vec![-1, 0, 2]), &p, &ExactOracle::new(caps()), &cfg).unwrap();
    assert_eq!(res.cost, 3);

    let four = WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 10), (2, 3, 1)]).unwrap();
    let sf = Family::new(FamilySpec::SteinerForest { parts: vec![vec![0, 1], vec![2, 3]] }, 4).unwrap();
    let j = fpt_proper_solve(&sf, &four).unwrap().unwrap();
    assert_eq!(four.cost_of(&j), 2);
    assert_eq!(connected_components(&four, &j).unwrap().count(), 2);
    let j = steiner_forest_fpt(&[vec![0, 1], vec![2, 3]], &four).unwrap().unwrap();
    assert_eq!(four.cost_of(&j), 2);

    let star = WeightedGraph::from_edges(3, &[(2, 0, 1), (2, 1, 1)]).unwrap();
    let j = gp2p_redblue_solve(&star, &[0, 1], &[2]).unwrap().unwrap();
    assert_eq!(star.cost_of(&j), 2);
    assert_eq!(gp2p_redblue_solve(&star, &[], &[2]).unwrap(), Some(EdgeSet::empty()));

    let cycle = WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
    let pair = Family::new(FamilySpec::SteinerForest { parts: vec![vec![0, 2]] }, 4).unwrap();
    let j = gw_solve(&pair, &cycle).unwrap().unwrap();
    assert_eq!(cycle.cost_of(&j), 2);
    assert!(gw_run(&gp2p(vec![-1, 0, 2]), &p).is_err());
}
